"""Logical circuits, the .ftc text format, and extended-rectangle extraction.

A circuit is a grid of timesteps over logical qubits.  Each timestep
assigns every qubit exactly one op: a wait, a single-qubit gate (H, S, T),
a CNOT (CX), or an error-correction block (XEC / ZEC).  EC blocks are
opaque here; the cost model says how many physical fault locations and
how much depth each one contributes.

Extended rectangles are the fault-tolerance unit of account: the region
between two consecutive same-type EC blocks on a qubit, including both
bounding blocks.  One error of the rectangle's type anywhere inside is
correctable; two are assumed fatal.  A CNOT between corrections welds the
rectangles of its two qubits into one super-extended rectangle, since the
CNOT copies errors across.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CircuitFormatError, InvalidParameterError, ScheduleError

__all__ = [
    "LogicalOp",
    "LogicalCircuit",
    "CostModel",
    "DEFAULT_COST_MODEL",
    "ExtendedRectangle",
    "DepthReport",
    "MIXING_KINDS",
    "EC_KINDS",
    "parse_circuit",
    "serialize_circuit",
    "insert_conventional_ec",
    "strip_corrections",
    "extract_rectangles",
    "depth",
]

# kind -> number of qubit operands
KIND_ARITY = {
    "WAIT": 1,
    "H": 1,
    "S": 1,
    "T": 1,
    "CX": 2,
    "XEC": 1,
    "ZEC": 1,
}

# Gates whose conjugation converts between X-type and Z-type errors (H
# outright swaps them; S and T are treated the same conservatively), so
# both correction types must sit on each side of them.
MIXING_KINDS = frozenset({"H", "S", "T"})
EC_KINDS = frozenset({"XEC", "ZEC"})


@dataclass(frozen=True)
class LogicalOp:
    """One logical operation; for CX, qubits are (control, target)."""

    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self) -> None:
        arity = KIND_ARITY.get(self.kind)
        if arity is None:
            raise CircuitFormatError(f"unknown op kind {self.kind!r}")
        if len(self.qubits) != arity:
            raise CircuitFormatError(
                f"{self.kind} takes {arity} qubit(s), got {len(self.qubits)}"
            )
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitFormatError(
                f"{self.kind} operands must be distinct, got {self.qubits}"
            )
        if any(q < 0 for q in self.qubits):
            raise CircuitFormatError(f"negative qubit index in {self}")

    @property
    def is_correction(self) -> bool:
        return self.kind in EC_KINDS

    @property
    def is_mixing(self) -> bool:
        return self.kind in MIXING_KINDS

    @property
    def is_wait(self) -> bool:
        return self.kind == "WAIT"

    @property
    def min_qubit(self) -> int:
        return min(self.qubits)

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.qubits)])


def _wait(q: int) -> LogicalOp:
    return LogicalOp("WAIT", (q,))


@dataclass(frozen=True)
class LogicalCircuit:
    """Timestep grid; in every step each qubit appears in exactly one op.

    Steps are stored with ops sorted by lowest qubit, so structurally
    equal circuits compare equal and serialize identically.
    """

    n_qubits: int
    steps: tuple[tuple[LogicalOp, ...], ...]

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise CircuitFormatError(f"n_qubits must be >= 1, got {self.n_qubits}")
        normalized = []
        for t, step in enumerate(self.steps):
            seen: set[int] = set()
            for op in step:
                for q in op.qubits:
                    if q >= self.n_qubits:
                        raise CircuitFormatError(
                            f"step {t}: qubit {q} out of range (circuit has "
                            f"{self.n_qubits})"
                        )
                    if q in seen:
                        raise CircuitFormatError(
                            f"step {t}: qubit {q} used more than once"
                        )
                    seen.add(q)
            if len(seen) != self.n_qubits:
                missing = sorted(set(range(self.n_qubits)) - seen)
                raise CircuitFormatError(
                    f"step {t}: qubits {missing} have no op (use from_partial "
                    "to fill implicit waits)"
                )
            normalized.append(tuple(sorted(step, key=lambda op: op.min_qubit)))
        object.__setattr__(self, "steps", tuple(normalized))

    @classmethod
    def from_partial(
        cls, n_qubits: int, steps: list[list[LogicalOp]] | tuple
    ) -> "LogicalCircuit":
        """Build a circuit, filling unmentioned qubits with WAIT."""
        full = []
        for step in steps:
            covered = {q for op in step for q in op.qubits}
            fill = [_wait(q) for q in range(n_qubits) if q not in covered]
            full.append(tuple(step) + tuple(fill))
        return cls(n_qubits, tuple(full))

    def __len__(self) -> int:
        return len(self.steps)

    def grid(self) -> list[list[LogicalOp]]:
        """grid[t][q] is the op acting on qubit q at timestep t."""
        out = []
        for step in self.steps:
            row: list[LogicalOp] = [None] * self.n_qubits  # type: ignore
            for op in step:
                for q in op.qubits:
                    row[q] = op
            out.append(row)
        return out

    def qubit_ops(self, q: int) -> list[tuple[int, LogicalOp]]:
        """(timestep, op) sequence for one qubit, in time order."""
        out = []
        for t, step in enumerate(self.steps):
            for op in step:
                if q in op.qubits:
                    out.append((t, op))
                    break
        return out

    def count_kinds(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for step in self.steps:
            for op in step:
                counts[op.kind] = counts.get(op.kind, 0) + 1
        return counts


def parse_circuit(text: str) -> LogicalCircuit:
    """Parse the .ftc format; see serialize_circuit for the grammar."""
    n_qubits: int | None = None
    steps: list[list[LogicalOp]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n_qubits is None:
            fields = line.split()
            if len(fields) != 2 or fields[0] != "qubits":
                raise CircuitFormatError(
                    f"line {lineno}: expected header 'qubits K', got {raw!r}"
                )
            try:
                n_qubits = int(fields[1])
            except ValueError:
                raise CircuitFormatError(
                    f"line {lineno}: qubit count must be an integer"
                ) from None
            if n_qubits < 1:
                raise CircuitFormatError(f"line {lineno}: qubit count must be >= 1")
            continue
        ops: list[LogicalOp] = []
        for chunk in line.split(";"):
            tokens = chunk.split()
            if not tokens:
                raise CircuitFormatError(f"line {lineno}: empty op between ';'")
            kind, args = tokens[0], tokens[1:]
            if kind not in KIND_ARITY:
                raise CircuitFormatError(f"line {lineno}: unknown op {kind!r}")
            try:
                qubits = tuple(int(a) for a in args)
            except ValueError:
                raise CircuitFormatError(
                    f"line {lineno}: qubit operands must be integers in {chunk!r}"
                ) from None
            try:
                ops.append(LogicalOp(kind, qubits))
            except CircuitFormatError as exc:
                raise CircuitFormatError(f"line {lineno}: {exc}") from None
        steps.append(ops)
    if n_qubits is None:
        raise CircuitFormatError("missing 'qubits K' header")
    try:
        return LogicalCircuit.from_partial(n_qubits, steps)
    except CircuitFormatError as exc:
        raise CircuitFormatError(str(exc)) from None


def serialize_circuit(circuit: LogicalCircuit) -> str:
    """Canonical .ftc text.

    Grammar: header "qubits K", then one line per timestep with ops
    joined by "; ", sorted by lowest qubit.  Implicit waits are omitted
    unless a step is all waits, in which case every WAIT is written so
    the step survives the round trip.
    """
    lines = [f"qubits {circuit.n_qubits}"]
    for step in circuit.steps:
        shown = [op for op in step if not op.is_wait] or list(step)
        lines.append("; ".join(str(op) for op in shown))
    return "\n".join(lines) + "\n"


def insert_conventional_ec(circuit: LogicalCircuit) -> LogicalCircuit:
    """Follow every timestep of gates/waits with an XEC step and a ZEC step.

    The input must be a bare circuit (no correction ops).  No leading pair
    is added here; schedules that want corrected preparation prepend one
    (see the scheduling pipeline).
    """
    for step in circuit.steps:
        for op in step:
            if op.is_correction:
                raise ScheduleError(
                    "input already contains correction ops; "
                    "strip_corrections first"
                )
    steps: list[tuple[LogicalOp, ...]] = []
    all_x = tuple(LogicalOp("XEC", (q,)) for q in range(circuit.n_qubits))
    all_z = tuple(LogicalOp("ZEC", (q,)) for q in range(circuit.n_qubits))
    for step in circuit.steps:
        steps.extend((step, all_x, all_z))
    return LogicalCircuit(circuit.n_qubits, tuple(steps))


def strip_corrections(circuit: LogicalCircuit) -> LogicalCircuit:
    """Remove all EC blocks, dropping timesteps that held nothing else."""
    steps: list[tuple[LogicalOp, ...]] = []
    for step in circuit.steps:
        kept = [op for op in step if not op.is_correction]
        if not kept and any(op.is_correction for op in step):
            continue  # a pure correction step vanishes entirely
        covered = {q for op in kept for q in op.qubits}
        fill = [_wait(q) for q in range(circuit.n_qubits) if q not in covered]
        if any(op.is_correction for op in step) and all(
            op.is_wait for op in kept + fill
        ):
            # mixed EC/wait step: the waits only padded the corrections
            continue
        steps.append(tuple(kept) + tuple(fill))
    return LogicalCircuit(circuit.n_qubits, tuple(steps))


@dataclass(frozen=True)
class CostModel:
    """Physical location and depth counts per logical op kind.

    n_xec/n_zec are the fault-location counts of one EC block (the N of
    the failure model); n_transversal covers any transversal
    single-qubit op including waits; n_cnot is one transversal CNOT pair
    counted as one location per physical pair.
    """

    n_xec: int = 70
    n_zec: int = 70
    n_transversal: int = 7
    n_cnot: int = 7
    d_xec: int = 8
    d_zec: int = 8
    d_gate: int = 1

    def __post_init__(self) -> None:
        for name in ("n_xec", "n_zec", "n_transversal", "n_cnot", "d_xec", "d_zec", "d_gate"):
            if getattr(self, name) < 1:
                raise InvalidParameterError(f"{name} must be >= 1")

    def locations(self, op: LogicalOp) -> int:
        if op.kind == "XEC":
            return self.n_xec
        if op.kind == "ZEC":
            return self.n_zec
        if op.kind == "CX":
            return self.n_cnot
        return self.n_transversal

    def op_depth(self, op: LogicalOp) -> int:
        if op.kind == "XEC":
            return self.d_xec
        if op.kind == "ZEC":
            return self.d_zec
        return self.d_gate


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True)
class ExtendedRectangle:
    """A typed circuit region that fails on two same-type errors.

    segments maps qubits to inclusive timestep intervals (cut EC blocks
    belong to both neighboring rectangles).  location_count is the sum of
    cost-model locations over all distinct ops in the region, bounding
    blocks and interior partner-type blocks included.  A rectangle is
    super-extended when CNOT merging makes it span several qubits and it
    holds more than one non-correction op.
    """

    error_type: str
    segments: tuple[tuple[int, tuple[int, int]], ...]
    location_count: int
    is_super: bool
    ops: tuple[tuple[int, LogicalOp], ...]
    _op_set: frozenset = field(repr=False, compare=False, default=frozenset())

    def __post_init__(self) -> None:
        if self.error_type not in ("X", "Z"):
            raise InvalidParameterError(f"error_type must be X or Z, got {self.error_type!r}")
        if not self.segments:
            raise InvalidParameterError("rectangle must have at least one segment")
        object.__setattr__(self, "_op_set", frozenset(self.ops))

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(sorted({q for q, _ in self.segments}))

    @property
    def start(self) -> int:
        return min(interval[0] for _, interval in self.segments)

    def contains(self, t: int, op: LogicalOp) -> bool:
        return (t, op) in self._op_set


def _check_mixing_adjacency(circuit: LogicalCircuit) -> None:
    # Every mixing gate needs both EC types on each side of it on its
    # qubit, scanning over ops of the other kind; circuit start and end
    # stand in as virtual corrections of both types.
    for q in range(circuit.n_qubits):
        seq = circuit.qubit_ops(q)
        for i, (t, op) in enumerate(seq):
            if not op.is_mixing:
                continue
            for direction in (-1, 1):
                kinds: set[str] = set()
                j = i + direction
                while 0 <= j < len(seq) and seq[j][1].is_correction:
                    kinds.add(seq[j][1].kind)
                    j += direction
                at_boundary = j < 0 or j >= len(seq)
                if not at_boundary and kinds != EC_KINDS:
                    side = "before" if direction == -1 else "after"
                    raise ScheduleError(
                        f"mixing gate {op} at step {t} lacks both correction "
                        f"types immediately {side} it (hybrid rectangles are "
                        "unsupported)"
                    )


def extract_rectangles(
    circuit: LogicalCircuit,
    error_type: str,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> list[ExtendedRectangle]:
    """Cut each qubit's timeline at EC blocks of error_type and merge
    CNOT-coupled pieces.

    Returns rectangles sorted by (earliest timestep, lowest qubit).
    Candidate intervals with nothing strictly between their cuts (for
    example the span before a block that opens the circuit) are not
    rectangles: they contain no correctable location.
    """
    if error_type not in ("X", "Z"):
        raise InvalidParameterError(f"error_type must be X or Z, got {error_type!r}")
    _check_mixing_adjacency(circuit)
    block_kind = error_type + "EC"
    n_steps = len(circuit.steps)

    # Per-qubit candidate intervals [a, b], cuts at same-type blocks with
    # virtual cuts at -1 and n_steps.
    intervals: list[tuple[int, int, int]] = []  # (qubit, a, b)
    per_qubit_ops: dict[int, list[tuple[int, LogicalOp]]] = {
        q: circuit.qubit_ops(q) for q in range(circuit.n_qubits)
    }
    for q in range(circuit.n_qubits):
        cuts = [-1]
        cuts.extend(t for t, op in per_qubit_ops[q] if op.kind == block_kind)
        cuts.append(n_steps)
        for a, b in zip(cuts, cuts[1:]):
            interior = [to for to in per_qubit_ops[q] if a < to[0] < b]
            if interior:
                intervals.append((q, a, b))

    # Union-find over intervals; a CX inside an interval couples the two
    # qubits' intervals at that timestep.
    parent = list(range(len(intervals)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    interval_at: dict[tuple[int, int], int] = {}  # (qubit, timestep) -> interval idx
    for idx, (q, a, b) in enumerate(intervals):
        for t, op in per_qubit_ops[q]:
            if a <= t <= b:
                interval_at[(q, t)] = interval_at.get((q, t), idx)
                # cut blocks belong to two intervals; interior ops to one
                if a < t < b:
                    interval_at[(q, t)] = idx
    for t, step in enumerate(circuit.steps):
        for op in step:
            if op.kind != "CX":
                continue
            c, tq = op.qubits
            ic, it = interval_at.get((c, t)), interval_at.get((tq, t))
            if ic is not None and it is not None:
                union(ic, it)

    groups: dict[int, list[int]] = {}
    for idx in range(len(intervals)):
        groups.setdefault(find(idx), []).append(idx)

    rectangles = []
    for members in groups.values():
        # Coalesce each qubit's intervals where they touch at a shared cut.
        by_qubit: dict[int, list[tuple[int, int]]] = {}
        for idx in members:
            q, a, b = intervals[idx]
            by_qubit.setdefault(q, []).append((a, b))
        segments = []
        ops: set[tuple[int, LogicalOp]] = set()
        for q, spans in by_qubit.items():
            spans.sort()
            merged = [list(spans[0])]
            for a, b in spans[1:]:
                if a <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], b)
                else:
                    merged.append([a, b])
            for a, b in merged:
                lo, hi = max(a, 0), min(b, n_steps - 1)
                segments.append((q, (lo, hi)))
                ops.update(to for to in per_qubit_ops[q] if lo <= to[0] <= hi)
        op_tuple = tuple(sorted(ops, key=lambda to: (to[0], to[1].min_qubit)))
        location_count = sum(cost_model.locations(op) for _, op in op_tuple)
        qubit_set = {q for q, _ in segments}
        non_ec = sum(1 for _, op in op_tuple if not op.is_correction)
        rectangles.append(
            ExtendedRectangle(
                error_type=error_type,
                segments=tuple(sorted(segments)),
                location_count=location_count,
                is_super=len(qubit_set) > 1 and non_ec > 1,
                ops=op_tuple,
            )
        )
    rectangles.sort(key=lambda r: (r.start, r.qubits[0]))
    return rectangles


@dataclass(frozen=True)
class DepthReport:
    """Weighted circuit depth plus op-count accounting."""

    total: int
    xec_blocks: int
    zec_blocks: int
    waits: int
    gates: int
    levels: int
    xec_block_depth: int
    zec_block_depth: int


def depth(
    circuit: LogicalCircuit,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    levels: int = 1,
    *,
    level1_schedule=None,
) -> DepthReport:
    """Total timestep depth with EC blocks weighted by the cost model.

    A step costs the largest depth of its ops.  At levels=2, each EC
    block costs the full depth of the level-1 circuit implementing it: a
    block-interior's worth of op slots, scheduled by level1_schedule (the
    active scheme's scheduling function) and recursively weighted.
    """
    if levels < 1:
        raise InvalidParameterError(f"levels must be >= 1, got {levels}")
    if levels == 1:
        d_x, d_z = cost_model.d_xec, cost_model.d_zec
    else:
        if level1_schedule is None:
            raise InvalidParameterError(
                "levels >= 2 needs level1_schedule (the scheme's scheduling "
                "function) to build EC-block implementations"
            )
        d_x, d_z = cost_model.d_xec, cost_model.d_zec
        for _ in range(levels - 1):
            slots_x = LogicalCircuit.from_partial(1, [[_wait(0)]] * cost_model.d_xec)
            slots_z = LogicalCircuit.from_partial(1, [[_wait(0)]] * cost_model.d_zec)
            inner = CostModel(
                n_xec=cost_model.n_xec,
                n_zec=cost_model.n_zec,
                n_transversal=cost_model.n_transversal,
                n_cnot=cost_model.n_cnot,
                d_xec=d_x,
                d_zec=d_z,
                d_gate=cost_model.d_gate,
            )
            d_x = _weighted_depth(level1_schedule(slots_x), inner)
            d_z = _weighted_depth(level1_schedule(slots_z), inner)

    counts = circuit.count_kinds()
    weights = {"XEC": d_x, "ZEC": d_z}
    total = 0
    for step in circuit.steps:
        total += max(weights.get(op.kind, cost_model.d_gate) for op in step)
    return DepthReport(
        total=total,
        xec_blocks=counts.get("XEC", 0),
        zec_blocks=counts.get("ZEC", 0),
        waits=counts.get("WAIT", 0),
        gates=sum(counts.get(k, 0) for k in ("H", "S", "T", "CX")),
        levels=levels,
        xec_block_depth=d_x,
        zec_block_depth=d_z,
    )


def _weighted_depth(circuit: LogicalCircuit, cost_model: CostModel) -> int:
    weights = {"XEC": cost_model.d_xec, "ZEC": cost_model.d_zec}
    return sum(
        max(weights.get(op.kind, cost_model.d_gate) for op in step)
        for step in circuit.steps
    )
