"""Built-in benchmark circuits.

memory5: one logical qubit idling for five timesteps, the standard
memory benchmark.  bell: Bell-state preparation (H then CNOT) on two
qubits.  chain3: two chained CNOTs on three qubits, the smallest circuit
where removing interior X correction welds all qubits into one X-type
super-extended rectangle.

All templates are bare circuits; run them through a scheduling pipeline
to add correction blocks.
"""

from __future__ import annotations

from .circuit import LogicalCircuit, LogicalOp

__all__ = ["memory5", "bell", "chain3", "TEMPLATES", "get_template"]


def memory5() -> LogicalCircuit:
    return LogicalCircuit.from_partial(1, [[LogicalOp("WAIT", (0,))] for _ in range(5)])


def bell() -> LogicalCircuit:
    return LogicalCircuit.from_partial(
        2,
        [
            [LogicalOp("H", (0,))],
            [LogicalOp("CX", (0, 1))],
        ],
    )


def chain3() -> LogicalCircuit:
    return LogicalCircuit.from_partial(
        3,
        [
            [LogicalOp("CX", (2, 1))],
            [LogicalOp("CX", (0, 1))],
        ],
    )


TEMPLATES = {
    "memory5": memory5,
    "bell": bell,
    "chain3": chain3,
}


def get_template(name: str) -> LogicalCircuit:
    try:
        factory = TEMPLATES[name]
    except KeyError:
        known = ", ".join(sorted(TEMPLATES))
        raise KeyError(f"unknown template {name!r}; known templates: {known}") from None
    return factory()
