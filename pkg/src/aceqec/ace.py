"""Asymmetric correction of errors: X-block removal scheduling.

When Z errors dominate, most X correction is wasted work.  apply_ace
strips every X block that is not actually protecting something: kept are
blocks adjacent to a mixing gate (H, S, T convert Z errors into X
errors), blocks guarding the prepared state at the circuit start, and a
detached closing pair before measurement.  A removed block's slot turns
into extra Z correction when some other qubit corrects in the same
timestep (keeping the grid synchronized); otherwise the slot vanishes
and the circuit gets shorter.  If stripping leaves a qubit without a
final X check, one closing XEC+ZEC pair is appended for the whole grid.

The price is larger X-type extended rectangles; rebalancing (in the
analysis module, where the failure model lives) re-inserts X blocks when
the X failure rate overtakes the Z failure rate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .circuit import (
    DEFAULT_COST_MODEL,
    CostModel,
    ExtendedRectangle,
    LogicalCircuit,
    LogicalOp,
    extract_rectangles,
    insert_conventional_ec,
    strip_corrections,
)
from .errors import InvalidParameterError, ScheduleError

__all__ = [
    "Replacement",
    "AcePolicy",
    "DEFAULT_POLICY",
    "apply_ace",
    "conventional_schedule",
    "ace_schedule",
    "no_x_schedule",
    "has_mixing_gates",
]


class Replacement(enum.Enum):
    """What a removed XEC slot becomes when the timestep survives."""

    REPLACE_WITH_ZEC = "replace_with_zec"
    REMOVE_TO_WAIT = "remove_to_wait"


@dataclass(frozen=True)
class AcePolicy:
    keep_around_mixing: bool = True
    replacement: Replacement = Replacement.REPLACE_WITH_ZEC
    max_x_rectangle_locations: int | None = None
    rebalance: bool = False

    def __post_init__(self) -> None:
        if not self.keep_around_mixing:
            raise InvalidParameterError(
                "keep_around_mixing cannot be disabled: X correction around "
                "mixing gates is mandatory (hybrid rectangles unsupported)"
            )
        if (
            self.max_x_rectangle_locations is not None
            and self.max_x_rectangle_locations < 1
        ):
            raise InvalidParameterError("max_x_rectangle_locations must be >= 1")


DEFAULT_POLICY = AcePolicy()


def _validate_scheduled(circuit: LogicalCircuit) -> None:
    """Reject circuits without correction structure.

    Requirements: each qubit's final op is an EC block, and every mixing
    gate has both correction types on each side (scanning over EC ops;
    circuit boundaries count as virtual corrections).  This admits both
    conventional schedules and this pass's own output, which keeps the
    transform idempotent.
    """
    from .circuit import _check_mixing_adjacency

    for q in range(circuit.n_qubits):
        seq = circuit.qubit_ops(q)
        if seq and not seq[-1][1].is_correction:
            raise ScheduleError(
                f"qubit {q} ends with {seq[-1][1]} instead of a correction "
                "block; schedule the circuit first (insert_conventional_ec)"
            )
    _check_mixing_adjacency(circuit)


def _xec_is_protected(
    seq: list[tuple[int, LogicalOp]], i: int
) -> bool:
    """Keep rules for the XEC at position i of one qubit's op sequence."""
    # Mixing gate adjacent on either side, scanning over ZEC blocks.
    for direction in (-1, 1):
        j = i + direction
        while 0 <= j < len(seq) and seq[j][1].kind == "ZEC":
            j += direction
        if 0 <= j < len(seq) and seq[j][1].is_mixing:
            return True
        if j < 0:
            return True  # opens the circuit: guards preparation
    # Detached closing pair: nothing but ZEC until the end, and the
    # preceding op is itself a correction block (not a bare gate/wait).
    j = i + 1
    while j < len(seq) and seq[j][1].kind == "ZEC":
        j += 1
    if j >= len(seq) and i > 0 and seq[i - 1][1].is_correction:
        return True
    return False


def apply_ace(
    circuit: LogicalCircuit,
    policy: AcePolicy = DEFAULT_POLICY,
    *,
    channel=None,
    cost_model: CostModel | None = None,
) -> LogicalCircuit:
    """Remove unprotected X correction from a scheduled circuit.

    With policy.rebalance a channel is required; the result is then
    passed through analysis.rebalance under the given cost model.
    """
    if len(circuit.steps) == 0:
        return circuit
    _validate_scheduled(circuit)

    removed: set[tuple[int, int]] = set()  # (timestep, qubit)
    for q in range(circuit.n_qubits):
        seq = circuit.qubit_ops(q)
        for i, (t, op) in enumerate(seq):
            if op.kind == "XEC" and not _xec_is_protected(seq, i):
                removed.add((t, q))

    new_steps: list[tuple[LogicalOp, ...]] = []
    for t, step in enumerate(circuit.steps):
        kept = [op for op in step if not (op.kind == "XEC" and (t, op.qubits[0]) in removed)]
        holes = [q for op in step for q in op.qubits if (t, q) in removed]
        if not holes:
            new_steps.append(tuple(step))
            continue
        if policy.replacement is Replacement.REMOVE_TO_WAIT:
            fill_kind = "WAIT"
        elif any(op.is_correction for op in kept):
            fill_kind = "ZEC"  # synchronize with the EC still in this step
        elif kept:
            fill_kind = "WAIT"  # step survives for its non-EC ops
        else:
            continue  # timestep emptied entirely: delete it
        filled = kept + [LogicalOp(fill_kind, (q,)) for q in holes]
        new_steps.append(tuple(filled))

    result = LogicalCircuit(circuit.n_qubits, tuple(new_steps))

    def ends_with_closing_pair(c: LogicalCircuit) -> bool:
        for q in range(c.n_qubits):
            seq = c.qubit_ops(q)
            if len(seq) < 2 or seq[-1][1].kind != "ZEC" or seq[-2][1].kind != "XEC":
                return False
        return True

    if not ends_with_closing_pair(result):
        all_x = tuple(LogicalOp("XEC", (q,)) for q in range(result.n_qubits))
        all_z = tuple(LogicalOp("ZEC", (q,)) for q in range(result.n_qubits))
        result = LogicalCircuit(
            result.n_qubits, result.steps + (all_x, all_z)
        )

    cm = cost_model if cost_model is not None else DEFAULT_COST_MODEL
    if policy.max_x_rectangle_locations is not None:
        result = _cap_x_rectangles(result, policy.max_x_rectangle_locations, cm)
    if policy.rebalance:
        if channel is None:
            raise InvalidParameterError(
                "policy.rebalance needs a channel; call with channel= or use "
                "analysis.rebalanced_schedule"
            )
        from .analysis import rebalance  # deferred: analysis imports this module

        result = rebalance(result, channel, cm)
    return result


def split_boundaries(
    rect: ExtendedRectangle, cost_model: CostModel
) -> list[tuple[int, int]]:
    """Timestep boundaries that would split rect into two live rectangles.

    Returns (insert_before_timestep, cumulative_locations) candidates; a
    boundary is viable only if ops remain strictly inside the cuts on
    both sides, so neither piece collapses into an empty span.
    """
    step_ts = sorted({t for t, _ in rect.ops})
    if len(step_ts) < 2:
        return []
    weight_at = {
        t: sum(cost_model.locations(op) for tt, op in rect.ops if tt == t)
        for t in step_ts
    }
    leading_cut = rect.ops[0][1].kind == rect.error_type + "EC"
    trailing_cut = rect.ops[-1][1].kind == rect.error_type + "EC"
    out = []
    cum = 0
    for k, t in enumerate(step_ts[:-1]):
        cum += weight_at[t]
        left_interior = k + 1 - (1 if leading_cut else 0)
        right_interior = (len(step_ts) - 1 - (k + 1)) + 1 - (1 if trailing_cut else 0)
        if left_interior >= 1 and right_interior >= 1:
            out.append((step_ts[k + 1], cum))
    return out


def insert_xec_step(
    circuit: LogicalCircuit, rect: ExtendedRectangle, cost_model: CostModel
) -> LogicalCircuit | None:
    """Split rect by inserting an XEC step at its location-weighted midpoint.

    The new step carries XEC on every qubit the rectangle spans (and
    waits elsewhere); returns None when no viable boundary exists.
    """
    candidates = split_boundaries(rect, cost_model)
    if not candidates:
        return None
    half = rect.location_count / 2.0
    best_t, _ = min(candidates, key=lambda tc: (abs(tc[1] - half), tc[0]))
    ops = [LogicalOp("XEC", (q,)) for q in rect.qubits]
    new_step = tuple(ops) + tuple(
        LogicalOp("WAIT", (q,))
        for q in range(circuit.n_qubits)
        if q not in rect.qubits
    )
    steps = circuit.steps[:best_t] + (new_step,) + circuit.steps[best_t:]
    return LogicalCircuit(circuit.n_qubits, steps)


def _cap_x_rectangles(
    circuit: LogicalCircuit, cap: int, cost_model: CostModel
) -> LogicalCircuit:
    for _ in range(sum(len(step) for step in circuit.steps) + 1):
        rects = extract_rectangles(circuit, "X", cost_model)
        over = [r for r in rects if r.location_count > cap]
        if not over:
            return circuit
        over.sort(key=lambda r: (-r.location_count, r.qubits[0], r.start))
        for rect in over:
            split = insert_xec_step(circuit, rect, cost_model)
            if split is not None:
                circuit = split
                break
        else:
            raise InvalidParameterError(
                f"cannot reduce X rectangles below {cap} locations: an "
                f"unsplittable rectangle of {over[0].location_count} remains"
            )
    raise ScheduleError("rectangle cap did not converge")  # pragma: no cover


def has_mixing_gates(circuit: LogicalCircuit) -> bool:
    return any(op.is_mixing for step in circuit.steps for op in step)


def conventional_schedule(circuit: LogicalCircuit) -> LogicalCircuit:
    """Both correction types after every timestep, plus a leading pair
    guarding state preparation."""
    scheduled = insert_conventional_ec(circuit)
    all_x = tuple(LogicalOp("XEC", (q,)) for q in range(circuit.n_qubits))
    all_z = tuple(LogicalOp("ZEC", (q,)) for q in range(circuit.n_qubits))
    return LogicalCircuit(circuit.n_qubits, (all_x, all_z) + scheduled.steps)


def ace_schedule(
    circuit: LogicalCircuit, policy: AcePolicy = DEFAULT_POLICY
) -> LogicalCircuit:
    return apply_ace(conventional_schedule(circuit), policy)


def no_x_schedule(circuit: LogicalCircuit) -> LogicalCircuit:
    """Z correction only: the asymptotic limit of a machine that never
    corrects X errors.

    Real X blocks are all dropped (preparation and measurement still act
    as virtual corrections bounding the X rectangles).  Only circuits
    free of mixing gates qualify: H, S and T convert Z errors to X errors
    and so cannot give up their X correction.
    """
    if has_mixing_gates(circuit):
        raise ScheduleError(
            "circuit contains mixing gates (H/S/T); X correction cannot be "
            "dropped entirely"
        )
    scheduled = conventional_schedule(circuit)
    # conventional steps are homogeneous, so dropping XEC empties exactly
    # the X steps and leaves every other step whole
    steps = tuple(
        step
        for step in scheduled.steps
        if any(op.kind != "XEC" for op in step)
    )
    return LogicalCircuit(circuit.n_qubits, steps)
