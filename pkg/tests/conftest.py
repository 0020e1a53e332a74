from __future__ import annotations

import random

from aceqec import KIND_ARITY, LogicalCircuit, LogicalOp

BARE_KINDS = ("WAIT", "H", "S", "CX")


def random_bare_circuit(
    rng: random.Random,
    n_qubits: int | None = None,
    n_steps: int | None = None,
    kinds: tuple[str, ...] = BARE_KINDS,
) -> LogicalCircuit:
    """Random correction-free circuit; idle qubits become waits."""
    if n_qubits is None:
        n_qubits = rng.randint(1, 4)
    if n_steps is None:
        n_steps = rng.randint(1, 6)
    steps = []
    for _ in range(n_steps):
        free = list(range(n_qubits))
        rng.shuffle(free)
        ops = []
        while free:
            if rng.random() < 0.2:
                free.pop()
                continue
            options = [k for k in kinds if KIND_ARITY[k] <= len(free)]
            kind = rng.choice(options)
            qs = tuple(free.pop() for _ in range(KIND_ARITY[kind]))
            ops.append(LogicalOp(kind, qs))
        steps.append(ops)
    return LogicalCircuit.from_partial(n_qubits, steps)
