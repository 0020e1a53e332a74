"""Analytic failure rates from rectangle structure, level composition,
parameter sweeps, and X/Z rebalancing.

The failure law is the worst-case pair rule: an extended rectangle with L
fault locations fails when two or more errors of its type land in it, so
its failure probability is the binomial tail P(>=2 | L, p).  Multiplying
rectangle survival probabilities gives a circuit-level lower bound on
fidelity; shared bounding blocks make the product slightly pessimistic,
which the Monte Carlo module quantifies.

Concatenation: the Steane code preserves error type (physical Z faults
cannot become logical X errors), so a level's per-op X/Z rectangle
failure rates form the next level's Pauli channel with p_y = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from . import ace as _ace
from .ace import (
    DEFAULT_POLICY,
    AcePolicy,
    ace_schedule,
    conventional_schedule,
    insert_xec_step,
    no_x_schedule,
)
from .circuit import (
    DEFAULT_COST_MODEL,
    CostModel,
    DepthReport,
    ExtendedRectangle,
    LogicalCircuit,
    LogicalOp,
    depth,
    extract_rectangles,
    strip_corrections,
)
from .errors import InfeasibleError, InvalidParameterError, ScheduleError
from .noise import PauliChannel, channel_from_total_and_alpha

__all__ = [
    "rectangle_failure",
    "RectangleFailure",
    "FailureReport",
    "circuit_failure",
    "logical_channel",
    "unit_cell",
    "unit_op_failure",
    "SCHEMES",
    "schedule_with",
    "LevelResult",
    "ConcatenationResult",
    "concatenated_failure",
    "composed_depth",
    "SweepRow",
    "sweep",
    "rows_to_csv",
    "CSV_HEADER",
    "crossover_alpha",
    "NoXComparison",
    "no_x_limit",
    "calibrate_ec_locations",
    "rebalance",
    "rebalanced_schedule",
]


def rectangle_failure(location_count: int, p: float) -> float:
    """P(>= 2 errors among L independent locations of per-location rate p).

    Evaluates 1 - (1-p)^L - L p (1-p)^(L-1) in expm1/log1p form so the
    tiny tails at realistic p (1e-5 and below) keep relative precision.
    """
    if location_count < 0:
        raise InvalidParameterError(f"location count must be >= 0, got {location_count}")
    if not (0.0 <= p <= 1.0):
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    if location_count < 2 or p == 0.0:
        return 0.0
    if p == 1.0:
        return 1.0
    survival_log = location_count * math.log1p(-p)
    # -expm1(s) = 1 - (1-p)^L; the single-error term reuses exp(s)
    return -math.expm1(survival_log) - (
        location_count * p / (1.0 - p)
    ) * math.exp(survival_log)


@dataclass(frozen=True)
class RectangleFailure:
    index: int
    rectangle: ExtendedRectangle
    p_fail: float

    @property
    def error_type(self) -> str:
        return self.rectangle.error_type

    @property
    def location_count(self) -> int:
        return self.rectangle.location_count


@dataclass(frozen=True)
class FailureReport:
    """Per-rectangle and whole-circuit failure probabilities by type."""

    per_rectangle: tuple[RectangleFailure, ...]
    p_fail_x: float
    p_fail_z: float
    p_fail_total: float
    depth: DepthReport

    def rectangles(self, error_type: str) -> list[RectangleFailure]:
        return [r for r in self.per_rectangle if r.error_type == error_type]


def _combine(p_fails: list[float]) -> float:
    # a saturated rectangle forces certain failure; log1p(-1) has no value
    if any(p >= 1.0 for p in p_fails):
        return 1.0
    log_survival = sum(math.log1p(-p) for p in p_fails)
    return -math.expm1(log_survival)


def circuit_failure(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    *,
    depth_report: DepthReport | None = None,
) -> FailureReport:
    """Worst-case pair rule over every rectangle, combined as a product.

    X rectangles fail on X-type errors (rate p_x + p_y per location), Z
    rectangles on Z-type (p_z + p_y).  The product over rectangles treats
    shared bounding blocks as independent, making the result a fidelity
    lower bound (failure upper bound).
    """
    entries: list[RectangleFailure] = []
    by_type: dict[str, list[float]] = {"X": [], "Z": []}
    index = 0
    for error_type, rate in (("X", channel.p_x_eff), ("Z", channel.p_z_eff)):
        for rect in extract_rectangles(circuit, error_type, cost_model):
            p = rectangle_failure(rect.location_count, rate)
            entries.append(RectangleFailure(index=index, rectangle=rect, p_fail=p))
            by_type[error_type].append(p)
            index += 1
    p_fail_x = _combine(by_type["X"])
    p_fail_z = _combine(by_type["Z"])
    p_fail_total = 1.0 - (1.0 - p_fail_x) * (1.0 - p_fail_z)
    if depth_report is None:
        depth_report = depth(circuit, cost_model)
    return FailureReport(
        per_rectangle=tuple(entries),
        p_fail_x=p_fail_x,
        p_fail_z=p_fail_z,
        p_fail_total=p_fail_total,
        depth=depth_report,
    )


def logical_channel(report: FailureReport, circuit: LogicalCircuit) -> PauliChannel:
    """Per-logical-op channel for the next concatenation level.

    Every gate/wait op inherits the failure probability of the X and Z
    rectangles containing it (a super-extended rectangle thus counts
    fully against each op it covers).  The two marginals combine as
    independent events: a cell failing both ways carries a logical Y, so
    p_y is their product and the channel's effective rates equal the
    marginals.  The attribution must be unambiguous: all ops in the cell
    must see the same (X, Z) failure pair, as they do in the uniform EC
    templates.
    """
    attributions: set[tuple[float, float]] = set()
    x_rects = report.rectangles("X")
    z_rects = report.rectangles("Z")
    for t, step in enumerate(circuit.steps):
        for op in step:
            if op.is_correction:
                continue
            p_x = next(
                (r.p_fail for r in x_rects if r.rectangle.contains(t, op)), None
            )
            p_z = next(
                (r.p_fail for r in z_rects if r.rectangle.contains(t, op)), None
            )
            if p_x is None or p_z is None:
                raise ScheduleError(
                    f"op {op} at step {t} is not covered by both rectangle "
                    "types; the report does not match the circuit"
                )
            attributions.add((p_x, p_z))
    if not attributions:
        raise InvalidParameterError(
            "circuit has no gate or wait ops; no per-op channel to derive"
        )
    if len(attributions) > 1:
        raise InvalidParameterError(
            "per-op attribution is ambiguous: ops see "
            f"{len(attributions)} distinct (X, Z) failure pairs; pass a "
            "uniform unit cell"
        )
    p_x, p_z = attributions.pop()
    # keeps the components a valid distribution even near saturation
    p_y = p_x * p_z
    return PauliChannel(p_x=p_x - p_y, p_y=p_y, p_z=p_z - p_y)


def unit_cell(slots: int) -> LogicalCircuit:
    """Bare template for one EC block's interior: `slots` wait ops on one
    qubit, each standing for a transversal op slot."""
    if slots < 1:
        raise InvalidParameterError(f"slots must be >= 1, got {slots}")
    return LogicalCircuit.from_partial(
        1, [[LogicalOp("WAIT", (0,))] for _ in range(slots)]
    )


# Scheduling pipelines by scheme name.  Each takes a bare circuit;
# ace_rebalanced additionally needs the channel and cost model.
SCHEMES: dict[str, str] = {
    "conventional": "conventional",
    "ace": "ace",
    "ace_rebalanced": "ace_rebalanced",
    "no_x": "no_x",
}


def schedule_with(
    scheme: str,
    circuit: LogicalCircuit,
    channel: PauliChannel | None = None,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    policy: AcePolicy = DEFAULT_POLICY,
) -> LogicalCircuit:
    if scheme == "conventional":
        return conventional_schedule(circuit)
    if scheme == "ace":
        return ace_schedule(circuit, policy)
    if scheme == "no_x":
        return no_x_schedule(circuit)
    if scheme == "ace_rebalanced":
        if channel is None:
            raise InvalidParameterError("scheme ace_rebalanced needs a channel")
        return rebalanced_schedule(circuit, channel, cost_model, policy)
    known = ", ".join(sorted(SCHEMES))
    raise InvalidParameterError(f"unknown scheme {scheme!r}; known schemes: {known}")


@dataclass(frozen=True)
class LevelResult:
    level: int
    channel: PauliChannel
    report: FailureReport


@dataclass(frozen=True)
class ConcatenationResult:
    levels: int
    per_level: tuple[LevelResult, ...]

    @property
    def final(self) -> FailureReport:
        return self.per_level[-1].report


def concatenated_failure(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    levels: int = 1,
    schemes: Sequence[str] = ("conventional",),
) -> ConcatenationResult:
    """Compose failure rates over concatenation levels.

    `circuit` is bare; schemes[k] schedules level k+1.  Level 1 analyzes
    one EC-block interior (a d_xec-slot unit cell under schemes[0]) with
    the physical channel; its logical channel drives the top circuit
    under schemes[-1].  With levels=1 this is circuit_failure of the
    scheduled circuit, exactly.
    """
    if levels not in (1, 2):
        raise InvalidParameterError(f"levels must be 1 or 2, got {levels}")
    if len(schemes) != levels:
        raise InvalidParameterError(
            f"need one scheme per level: got {len(schemes)} for {levels} levels"
        )
    if levels == 1:
        top = schedule_with(schemes[0], circuit, channel, cost_model)
        report = circuit_failure(top, channel, cost_model)
        return ConcatenationResult(1, (LevelResult(1, channel, report),))

    cell = schedule_with(schemes[0], unit_cell(cost_model.d_xec), channel, cost_model)
    report1 = circuit_failure(cell, channel, cost_model)
    channel2 = logical_channel(report1, cell)
    top = schedule_with(schemes[1], circuit, channel2, cost_model)

    def level1(c: LogicalCircuit) -> LogicalCircuit:
        return schedule_with(schemes[0], c, channel, cost_model)

    depth2 = depth(top, cost_model, 2, level1_schedule=level1)
    report2 = circuit_failure(top, channel2, cost_model, depth_report=depth2)
    return ConcatenationResult(
        2,
        (
            LevelResult(1, channel, report1),
            LevelResult(2, channel2, report2),
        ),
    )


def composed_depth(
    circuit: LogicalCircuit,
    cost_model: CostModel,
    levels: int,
    schemes: Sequence[str],
    channel: PauliChannel | None = None,
) -> DepthReport:
    """Depth of the scheme-scheduled circuit with recursively composed
    EC-block depths (level-k blocks cost their level-(k-1) schedule)."""
    top = schedule_with(schemes[-1], circuit, channel, cost_model)
    if levels == 1:
        return depth(top, cost_model)

    def level1(c: LogicalCircuit) -> LogicalCircuit:
        return schedule_with(schemes[0], c, channel, cost_model)

    return depth(top, cost_model, levels, level1_schedule=level1)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    p_total: float
    scheme: str
    levels: int
    depth: int
    p_fail_x: float
    p_fail_z: float
    p_fail_total: float


CSV_HEADER = "alpha,p_total,scheme,levels,depth,p_fail_x,p_fail_z,p_fail_total"


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.alpha,
                    r.p_total,
                    r.scheme,
                    r.levels,
                    r.depth,
                    r.p_fail_x,
                    r.p_fail_z,
                    r.p_fail_total,
                )
            )
        )
    return "\n".join(lines) + "\n"


def sweep(
    circuit: LogicalCircuit,
    alphas: Sequence[float],
    p_totals: Sequence[float],
    schemes: Sequence[str],
    levels_list: Sequence[int] = (1,),
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> list[SweepRow]:
    """Evaluate every grid point; rows ordered alpha-major, then p_total,
    scheme, levels."""
    if not (alphas and p_totals and schemes and levels_list):
        raise InvalidParameterError("sweep grids must be non-empty")
    rows = []
    for alpha in alphas:
        for p_total in p_totals:
            channel = channel_from_total_and_alpha(p_total, alpha)
            for scheme in schemes:
                for levels in levels_list:
                    result = concatenated_failure(
                        circuit, channel, cost_model, levels, [scheme] * levels
                    )
                    report = result.final
                    rows.append(
                        SweepRow(
                            alpha=alpha,
                            p_total=p_total,
                            scheme=scheme,
                            levels=levels,
                            depth=report.depth.total,
                            p_fail_x=report.p_fail_x,
                            p_fail_z=report.p_fail_z,
                            p_fail_total=report.p_fail_total,
                        )
                    )
    return rows


def unit_op_failure(
    scheme: str,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> float:
    """Failure probability of one logical op slot inside an EC block
    scheduled by `scheme` (the per-op X and Z rectangle failures
    combined).  This is the single-level figure of merit the scheme
    comparisons use."""
    cell = schedule_with(scheme, unit_cell(cost_model.d_xec), channel, cost_model)
    report = circuit_failure(cell, channel, cost_model)
    op_channel = logical_channel(report, cell)
    return 1.0 - (1.0 - op_channel.p_x_eff) * (1.0 - op_channel.p_z_eff)


def crossover_alpha(
    p_total: float,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    scheme: str = "ace",
    baseline: str = "conventional",
    lo: float = 1.0,
    hi: float = 1e4,
    tol: float = 1e-6,
) -> float:
    """Smallest asymmetry at which `scheme` beats `baseline` on the
    single-level unit-cell figure of merit, found by bisection."""

    def advantage(alpha: float) -> float:
        channel = channel_from_total_and_alpha(p_total, alpha)
        return unit_op_failure(baseline, channel, cost_model) - unit_op_failure(
            scheme, channel, cost_model
        )

    if advantage(lo) > 0:
        return lo
    if advantage(hi) <= 0:
        raise InfeasibleError(
            f"no crossover in [{lo}, {hi}]: {scheme} never beats {baseline}"
        )
    while hi / lo > 1.0 + tol:
        mid = math.sqrt(lo * hi)
        if advantage(mid) > 0:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class NoXComparison:
    feasible: bool
    reason: str
    depth_reduction: float
    failure_ratio: float
    no_x: ConcatenationResult | None
    conventional: ConcatenationResult | None


def no_x_limit(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    levels: int = 2,
) -> NoXComparison:
    """Compare the no-X-correction limit against the conventional
    schedule at the same level count.

    Infeasibility (mixing gates present, or X failure overtaking Z under
    the given channel) is reported in the record, not raised.
    """
    if _ace.has_mixing_gates(circuit):
        return NoXComparison(
            feasible=False,
            reason="circuit contains mixing gates; X correction cannot be dropped",
            depth_reduction=math.nan,
            failure_ratio=math.nan,
            no_x=None,
            conventional=None,
        )
    schemes_nox = ["no_x"] * levels
    schemes_conv = ["conventional"] * levels
    nox = concatenated_failure(circuit, channel, cost_model, levels, schemes_nox)
    conv = concatenated_failure(circuit, channel, cost_model, levels, schemes_conv)
    depth_reduction = 1.0 - nox.final.depth.total / conv.final.depth.total
    if nox.final.p_fail_total > 0:
        failure_ratio = conv.final.p_fail_total / nox.final.p_fail_total
    else:
        failure_ratio = math.inf
    feasible = nox.final.p_fail_x <= nox.final.p_fail_z
    reason = "" if feasible else (
        "X failure exceeds Z failure without X correction at this asymmetry"
    )
    return NoXComparison(
        feasible=feasible,
        reason=reason,
        depth_reduction=depth_reduction,
        failure_ratio=failure_ratio,
        no_x=nox,
        conventional=conv,
    )


def calibrate_ec_locations(
    p_total: float = 1e-5,
    candidates: Sequence[int] = tuple(range(20, 201, 10)),
    cost_model: CostModel = DEFAULT_COST_MODEL,
    crossover_band: tuple[float, float] = (3.0, 8.0),
    plateau_band: tuple[float, float] = (1.5, 2.5),
    min_two_level_ratio: float = 3.0,
    saturation_band: tuple[float, float] = (5.0, 20.0),
) -> list[int]:
    """EC-block location counts N for which all single- and two-level
    comparison bands hold simultaneously; used to pick the default N."""
    passing = []
    for n in candidates:
        cm = CostModel(
            n_xec=n,
            n_zec=n,
            n_transversal=cost_model.n_transversal,
            n_cnot=cost_model.n_cnot,
            d_xec=cost_model.d_xec,
            d_zec=cost_model.d_zec,
            d_gate=cost_model.d_gate,
        )
        if _passes_bands(
            p_total,
            cm,
            crossover_band,
            plateau_band,
            min_two_level_ratio,
            saturation_band,
        ):
            passing.append(n)
    return passing


def _passes_bands(
    p_total, cm, crossover_band, plateau_band, min_ratio, saturation_band
) -> bool:
    from .templates import memory5

    try:
        alpha_star = crossover_alpha(p_total, cm)
    except InfeasibleError:
        return False
    if not (crossover_band[0] <= alpha_star <= crossover_band[1]):
        return False
    for alpha in (15.0, 30.0, 100.0, 1e4):
        channel = channel_from_total_and_alpha(p_total, alpha)
        ratio = unit_op_failure("conventional", channel, cm) / unit_op_failure(
            "ace", channel, cm
        )
        if not (plateau_band[0] <= ratio <= plateau_band[1]):
            return False
    alphas = [10 ** (3 * i / 24) for i in range(25)]
    ratios = []
    raw = memory5()
    for alpha in alphas:
        channel = channel_from_total_and_alpha(p_total, alpha)
        conv = concatenated_failure(raw, channel, cm, 2, ["conventional"] * 2)
        ace = concatenated_failure(raw, channel, cm, 2, ["ace"] * 2)
        ratios.append(conv.final.p_fail_total / ace.final.p_fail_total)
    peak = max(ratios)
    if peak < min_ratio:
        return False
    saturation_alpha = next(
        a for a, r in zip(alphas, ratios) if r >= 0.9 * peak
    )
    return saturation_band[0] <= saturation_alpha <= saturation_band[1]


def rebalance(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> LogicalCircuit:
    """Re-insert X correction until the X failure rate stops exceeding
    the Z failure rate.

    Greedy: each round splits the largest X rectangle at its
    location-weighted midpoint (ties: lowest qubit, then earliest
    timestep).  If no rectangle can be split and X still dominates, the
    conventional schedule of the underlying bare circuit is returned.
    """
    if channel.alpha < 1.0:
        raise InvalidParameterError(
            f"rebalance requires alpha >= 1, got {channel.alpha}"
        )
    max_rounds = sum(len(step) for step in circuit.steps) + 1
    current = circuit
    for _ in range(max_rounds):
        report = circuit_failure(current, channel, cost_model)
        if report.p_fail_x <= report.p_fail_z:
            return current
        rects = sorted(
            extract_rectangles(current, "X", cost_model),
            key=lambda r: (-r.location_count, r.qubits[0], r.start),
        )
        for rect in rects:
            split = insert_xec_step(current, rect, cost_model)
            if split is not None:
                current = split
                break
        else:
            return conventional_schedule(strip_corrections(current))
    return conventional_schedule(strip_corrections(current))


def rebalanced_schedule(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    policy: AcePolicy = DEFAULT_POLICY,
) -> LogicalCircuit:
    """ACE schedule followed by rebalancing."""
    return rebalance(ace_schedule(circuit, policy), channel, cost_model)
