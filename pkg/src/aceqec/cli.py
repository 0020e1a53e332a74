"""Command-line front end.

Subcommands: channel, schedule, analyze, simulate, sweep, verify.  Each
one produces a machine-readable artifact (CSV, or .ftc for schedule):
with --output it goes to that file and a human summary goes to stdout;
without --output the artifact itself goes to stdout and the summary to
stderr.  --quiet drops the summary either way, leaving only the
artifact.  Exit codes: 0 success, 1 input error, 2 internal invariant
violation (including a failing verify run).

A plain-text key=value file can stand in for flags via --config; values
given on the command line win over the file.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .ace import AcePolicy, Replacement
from .analysis import (
    CSV_HEADER,
    ConcatenationResult,
    FailureReport,
    LevelResult,
    SweepRow,
    circuit_failure,
    concatenated_failure,
    rows_to_csv,
    schedule_with,
    sweep,
)
from .circuit import (
    CostModel,
    LogicalCircuit,
    LogicalOp,
    depth as circuit_depth,
    parse_circuit,
    serialize_circuit,
)
from .errors import AceqecError, InvalidParameterError
from .noise import (
    DecoherenceParams,
    PauliChannel,
    asymmetry,
    channel_from_total_and_alpha,
    derive_channel,
    get_preset,
    load_preset_table,
)
from .simulate import mc_estimate, steane, verify_distance3, verify_type_preservation
from .templates import TEMPLATES, get_template

__all__ = ["main", "build_parser"]

SCHEME_CHOICES = ("conventional", "ace", "ace_rebalanced", "no_x")
MC_CSV_HEADER = CSV_HEADER + ",shots,seed,ci_halfwidth"

# config-file keys that are boolean flags rather than valued options
_BOOL_KEYS = frozenset({"plot", "quiet", "rebalance"})


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract reserves 2 for internal
    # invariant violations, so usage errors are remapped to 1.
    def error(self, message: str):  # type: ignore[override]
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


# ---------------------------------------------------------------------------
# flag grids and the config file


def parse_value_grid(text: str, name: str) -> list[float]:
    """Grid syntax: "start:stop:log[:n]" (or :lin), default n = 25, or a
    comma-separated list of values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise InvalidParameterError(
                f"{name}: grid must be start:stop:scale[:n], got {text!r}"
            )
        try:
            start, stop = float(parts[0]), float(parts[1])
            n = int(parts[3]) if len(parts) == 4 else 25
        except ValueError:
            raise InvalidParameterError(f"{name}: bad grid numbers in {text!r}") from None
        scale = parts[2]
        if n < 2:
            raise InvalidParameterError(f"{name}: grid needs at least 2 points")
        if scale == "log":
            if start <= 0 or stop <= 0:
                raise InvalidParameterError(f"{name}: log grid endpoints must be > 0")
            return [float(v) for v in np.logspace(math.log10(start), math.log10(stop), n)]
        if scale == "lin":
            return [float(v) for v in np.linspace(start, stop, n)]
        raise InvalidParameterError(f"{name}: scale must be log or lin, got {scale!r}")
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise InvalidParameterError(f"{name}: bad value list {text!r}") from None
    if not values:
        raise InvalidParameterError(f"{name}: no values given")
    return values


def _config_tokens(path: str) -> list[str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config file: {exc}") from None
    tokens: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        else:
            parts = line.split(None, 1)
            key, value = parts[0], (parts[1] if len(parts) > 1 else "true")
        key = key.strip().replace("_", "-")
        value = value.strip()
        if not key:
            raise InvalidParameterError(f"{path}:{lineno}: empty key")
        if key in _BOOL_KEYS:
            if value.lower() in ("true", "yes", "1", ""):
                tokens.append(f"--{key}")
            elif value.lower() in ("false", "no", "0"):
                pass
            else:
                raise InvalidParameterError(
                    f"{path}:{lineno}: {key} takes true/false, got {value!r}"
                )
        else:
            tokens.extend([f"--{key}", value])
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    """Splice --config file contents in right after the subcommand so
    explicit command-line flags override the file (later wins)."""
    rest: list[str] = []
    config_paths: list[str] = []
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg == "--config":
            if i + 1 >= len(argv):
                raise InvalidParameterError("--config needs a file path")
            config_paths.append(argv[i + 1])
            i += 2
        elif arg.startswith("--config="):
            config_paths.append(arg.split("=", 1)[1])
            i += 1
        else:
            rest.append(arg)
            i += 1
    if not config_paths:
        return rest
    expanded: list[str] = []
    for path in config_paths:
        expanded.extend(_config_tokens(path))
    for j, arg in enumerate(rest):
        if not arg.startswith("-"):
            return rest[: j + 1] + expanded + rest[j + 1 :]
    return rest + expanded


# ---------------------------------------------------------------------------
# shared argument groups


def _add_channel_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("channel source (exactly one)")
    g.add_argument("--preset", help="named hardware preset, e.g. P:Si")
    g.add_argument(
        "--preset-file", help="load presets from a table file instead of built-ins"
    )
    g.add_argument("--t1", type=float, help="relaxation time (s)")
    g.add_argument("--t2", type=float, help="dephasing time (s)")
    g.add_argument(
        "--gate-time",
        type=float,
        help="op duration (s); with --preset, overrides the default T2/1000",
    )
    g.add_argument("--p-total", type=float, help="total error probability per location")
    g.add_argument("--alpha", type=float, help="Z-to-X asymmetry ratio")


def _add_circuit_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("input circuit (exactly one)")
    g.add_argument(
        "--template", choices=sorted(TEMPLATES), help="built-in benchmark circuit"
    )
    g.add_argument("--circuit", help="path to a bare .ftc circuit file")


def _add_cost_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--ec-locations",
        type=int,
        help="fault locations per EC block (default 70)",
    )
    p.add_argument(
        "--ec-depth", type=int, help="timestep depth per EC block (default 8)"
    )


def _add_output_args(p: argparse.ArgumentParser, plot: bool = False) -> None:
    p.add_argument("--output", help="write the artifact here instead of stdout")
    if plot:
        p.add_argument(
            "--plot",
            action="store_true",
            help="also render figures next to the output file (needs --output)",
        )
    p.add_argument(
        "--quiet", action="store_true", help="emit only the artifact, no summary"
    )


def _add_policy_args(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--replacement",
        choices=("zec", "wait"),
        default="zec",
        help="what removed X blocks become (default zec)",
    )
    p.add_argument(
        "--max-x-locations",
        type=int,
        help="split X rectangles larger than this many locations",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="aceqec",
        description="Asymmetric error-correction scheduling and analysis "
        "for concatenated CSS codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "channel",
        help="derive a Pauli channel and its asymmetry",
        description="Derive the per-location Pauli channel from decoherence "
        "times or build one from p_total and alpha.",
    )
    _add_channel_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser(
        "schedule",
        help="write a corrected .ftc circuit",
        description="Insert correction blocks into a bare circuit under the "
        "chosen scheme and write the scheduled .ftc text.",
    )
    _add_circuit_args(p)
    _add_channel_args(p)
    p.add_argument("--scheme", choices=SCHEME_CHOICES, default="ace")
    _add_policy_args(p)
    _add_cost_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser(
        "analyze",
        help="analytic failure report for one configuration",
        description="Failure probabilities from the rectangle pair rule, "
        "optionally concatenated over two levels.",
    )
    _add_circuit_args(p)
    _add_channel_args(p)
    p.add_argument(
        "--scheme",
        choices=SCHEME_CHOICES + ("as-is",),
        default="conventional",
        help="scheduling scheme; as-is analyzes an already corrected input",
    )
    _add_policy_args(p)
    p.add_argument("--levels", type=int, choices=(1, 2), default=1)
    _add_cost_args(p)
    _add_output_args(p, plot=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser(
        "simulate",
        help="Monte Carlo check of the failure model",
        description="Sample faults over all physical locations and score "
        "rectangles by the two-or-more rule.",
    )
    _add_circuit_args(p)
    _add_channel_args(p)
    p.add_argument(
        "--scheme",
        choices=SCHEME_CHOICES + ("as-is",),
        default="conventional",
    )
    _add_policy_args(p)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    _add_cost_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "sweep",
        help="failure rates over an (alpha, p_total) grid",
        description="Evaluate schemes over a grid of channels and write one "
        "CSV row per point.",
    )
    _add_circuit_args(p)
    p.add_argument(
        "--alpha",
        required=True,
        help="grid: start:stop:log[:n] (n defaults to 25) or v1,v2,...",
    )
    p.add_argument("--p-total", required=True, help="value list: v1,v2,...")
    p.add_argument(
        "--schemes",
        default="conventional,ace",
        help="comma-separated scheme names (default conventional,ace)",
    )
    p.add_argument("--levels", default="1", help="comma-separated levels from {1,2}")
    _add_cost_args(p)
    _add_output_args(p, plot=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser(
        "verify",
        help="run the stabilizer verification suites",
        description="Exhaustive distance-3 decoding checks and Pauli-frame "
        "type preservation on random correction-free circuits.",
    )
    p.add_argument("--trials", type=int, default=100, help="random frame circuits")
    p.add_argument("--seed", type=int, default=0)
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    return parser


# ---------------------------------------------------------------------------
# shared pieces


class _Emitter:
    """Routes the artifact and the human summary per the --output rule."""

    def __init__(self, output: str | None, quiet: bool):
        self.output = output
        self.quiet = quiet

    def artifact(self, text: str) -> None:
        if self.output:
            Path(self.output).write_text(text)
        else:
            sys.stdout.write(text)

    def say(self, line: str = "") -> None:
        if self.quiet:
            return
        stream = sys.stdout if self.output else sys.stderr
        print(line, file=stream)


def _resolve_channel(args) -> PauliChannel:
    channel, _ = _resolve_channel_and_preset(args)
    return channel


def _resolve_channel_and_preset(args):
    has_preset = args.preset is not None
    has_times = args.t1 is not None or args.t2 is not None
    has_rates = args.p_total is not None or args.alpha is not None
    picked = sum([has_preset, has_times, has_rates])
    if picked != 1:
        raise InvalidParameterError(
            "give exactly one channel source: --preset, --t1/--t2/--gate-time, "
            "or --p-total/--alpha"
        )
    if has_preset:
        if args.preset_file:
            from .noise import _canonical_name

            table = load_preset_table(args.preset_file)
            wanted = _canonical_name(args.preset)
            match = [p for p in table if _canonical_name(p.name) == wanted]
            if not match:
                known = ", ".join(sorted(p.name for p in table))
                raise InvalidParameterError(
                    f"preset {args.preset!r} not in {args.preset_file} "
                    f"(has: {known})"
                )
            preset = match[0]
        else:
            try:
                preset = get_preset(args.preset)
            except KeyError as exc:
                raise InvalidParameterError(str(exc.args[0])) from None
        gate_time = args.gate_time if args.gate_time is not None else preset.t2 / 1000.0
        return derive_channel(DecoherenceParams(preset.t1, preset.t2, gate_time)), preset
    if has_times:
        if args.t1 is None or args.t2 is None or args.gate_time is None:
            raise InvalidParameterError(
                "decoherence channel needs all of --t1, --t2 and --gate-time"
            )
        return derive_channel(DecoherenceParams(args.t1, args.t2, args.gate_time)), None
    if args.p_total is None or args.alpha is None:
        raise InvalidParameterError("rate channel needs both --p-total and --alpha")
    return channel_from_total_and_alpha(args.p_total, args.alpha), None


def _has_channel_flags(args) -> bool:
    return any(
        getattr(args, name, None) is not None
        for name in ("preset", "t1", "t2", "p_total", "alpha")
    )


def _resolve_circuit(args) -> LogicalCircuit:
    if (args.template is None) == (args.circuit is None):
        raise InvalidParameterError("give exactly one of --template or --circuit")
    if args.template:
        return get_template(args.template)
    try:
        text = Path(args.circuit).read_text()
    except OSError as exc:
        raise InvalidParameterError(f"cannot read circuit file: {exc}") from None
    return parse_circuit(text)


def _resolve_cost_model(args) -> CostModel:
    kwargs = {}
    if getattr(args, "ec_locations", None) is not None:
        kwargs["n_xec"] = args.ec_locations
        kwargs["n_zec"] = args.ec_locations
    if getattr(args, "ec_depth", None) is not None:
        kwargs["d_xec"] = args.ec_depth
        kwargs["d_zec"] = args.ec_depth
    return CostModel(**kwargs)


def _resolve_policy(args) -> AcePolicy:
    replacement = (
        Replacement.REMOVE_TO_WAIT
        if getattr(args, "replacement", "zec") == "wait"
        else Replacement.REPLACE_WITH_ZEC
    )
    return AcePolicy(
        replacement=replacement,
        max_x_rectangle_locations=getattr(args, "max_x_locations", None),
    )


def _require_bare(circuit: LogicalCircuit, flag: str) -> None:
    if any(op.is_correction for step in circuit.steps for op in step):
        raise InvalidParameterError(
            f"{flag}: input circuit already contains correction blocks; "
            "schemes schedule bare circuits (use --scheme as-is where "
            "supported)"
        )


def _summarize_report(emit: _Emitter, label: str, report: FailureReport) -> None:
    emit.say(f"{label}:")
    emit.say(f"  depth          {report.depth.total}")
    emit.say(
        f"  blocks         {report.depth.xec_blocks} X + {report.depth.zec_blocks} Z"
        f", waits {report.depth.waits}, gates {report.depth.gates}"
    )
    for et in ("X", "Z"):
        rects = report.rectangles(et)
        sizes = ", ".join(str(r.location_count) for r in rects)
        emit.say(f"  {et} rectangles   {len(rects)}  (locations: {sizes})")
    emit.say(f"  p_fail_x       {_fmt(report.p_fail_x)}")
    emit.say(f"  p_fail_z       {_fmt(report.p_fail_z)}")
    emit.say(f"  p_fail_total   {_fmt(report.p_fail_total)}")


def _report_row(
    channel: PauliChannel, scheme: str, levels: int, report: FailureReport
) -> SweepRow:
    return SweepRow(
        alpha=channel.alpha,
        p_total=channel.p_total,
        scheme=scheme,
        levels=levels,
        depth=report.depth.total,
        p_fail_x=report.p_fail_x,
        p_fail_z=report.p_fail_z,
        p_fail_total=report.p_fail_total,
    )


def _plot_target(args, suffix: str) -> Path:
    if not args.output:
        raise InvalidParameterError("--plot needs --output to name the figure file")
    out = Path(args.output)
    return out.with_name(out.stem + suffix)


# ---------------------------------------------------------------------------
# subcommands


def cmd_channel(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    channel, preset = _resolve_channel_and_preset(args)
    lines = [
        "p_x,p_y,p_z,p_i,p_total,alpha",
        ",".join(
            _fmt(v)
            for v in (
                channel.p_x,
                channel.p_y,
                channel.p_z,
                channel.p_i,
                channel.p_total,
                channel.alpha,
            )
        ),
    ]
    alpha = channel.alpha
    emit.say(f"p_x     = {_fmt(channel.p_x)}")
    emit.say(f"p_y     = {_fmt(channel.p_y)}")
    emit.say(f"p_z     = {_fmt(channel.p_z)}")
    emit.say(f"p_total = {_fmt(channel.p_total)}")
    if math.isfinite(alpha):
        order = preset.expected_alpha_order if preset else round(math.log10(alpha))
        note = f"order 10^{order}"
        if preset and not preset.matches_order(alpha):
            note += f", outside the expected band for {preset.name}"
        emit.say(f"alpha   = {_fmt(alpha)}  ({note})")
    else:
        emit.say("alpha   = inf  (phase-only channel)")
    emit.artifact("\n".join(lines) + "\n")
    return 0


def cmd_schedule(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    circuit = _resolve_circuit(args)
    _require_bare(circuit, "schedule")
    cm = _resolve_cost_model(args)
    policy = _resolve_policy(args)
    channel = _resolve_channel(args) if _has_channel_flags(args) else None
    if args.scheme == "ace_rebalanced" and channel is None:
        raise InvalidParameterError(
            "scheme ace_rebalanced needs a channel source to balance against"
        )
    scheduled = schedule_with(args.scheme, circuit, channel, cm, policy)
    counts = scheduled.count_kinds()
    emit.say(
        f"{args.scheme}: {len(scheduled)} timesteps, "
        f"{counts.get('XEC', 0)} XEC + {counts.get('ZEC', 0)} ZEC blocks, "
        f"depth {circuit_depth(scheduled, cm).total}"
    )
    emit.artifact(serialize_circuit(scheduled))
    return 0


def cmd_analyze(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    circuit = _resolve_circuit(args)
    channel = _resolve_channel(args)
    cm = _resolve_cost_model(args)
    policy = _resolve_policy(args)
    if args.scheme == "as-is":
        if args.levels != 1:
            raise InvalidParameterError("--scheme as-is supports --levels 1 only")
        report = circuit_failure(circuit, channel, cm)
        result = ConcatenationResult(1, (LevelResult(1, channel, report),))
    elif args.levels == 1:
        # direct path so the policy flags reach the scheduler
        _require_bare(circuit, "analyze")
        scheduled = schedule_with(args.scheme, circuit, channel, cm, policy)
        report = circuit_failure(scheduled, channel, cm)
        result = ConcatenationResult(1, (LevelResult(1, channel, report),))
    else:
        _require_bare(circuit, "analyze")
        result = concatenated_failure(
            circuit, channel, cm, args.levels, [args.scheme] * args.levels
        )
    for lv in result.per_level:
        _summarize_report(emit, f"level {lv.level} ({args.scheme})", lv.report)
    row = _report_row(channel, args.scheme, args.levels, result.final)
    emit.artifact(rows_to_csv([row]))
    if getattr(args, "plot", False):
        from .plotting import plot_rectangles

        target = _plot_target(args, "_rectangles.png")
        plot_rectangles(result.final, target)
        emit.say(f"figure: {target}")
    return 0


def cmd_simulate(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    circuit = _resolve_circuit(args)
    channel = _resolve_channel(args)
    cm = _resolve_cost_model(args)
    policy = _resolve_policy(args)
    if args.scheme == "as-is":
        scheduled = circuit
    else:
        _require_bare(circuit, "simulate")
        scheduled = schedule_with(args.scheme, circuit, channel, cm, policy)
    est = mc_estimate(
        scheduled, channel, cm, shots=args.shots, seed=args.seed, n_jobs=args.jobs
    )
    analytic = circuit_failure(scheduled, channel, cm)
    emit.say(f"shots {est.shots}, seed {est.seed}")
    emit.say(
        f"MC       p_fail_total = {_fmt(est.p_fail_total)} "
        f"+/- {_fmt(est.ci_halfwidth)} (95%)"
    )
    emit.say(f"analytic p_fail_total = {_fmt(analytic.p_fail_total)} (upper bound)")
    for tally, rf in zip(est.per_rectangle, analytic.per_rectangle):
        emit.say(
            f"  rect {tally.index:2d} {tally.error_type} L={tally.location_count:<5d}"
            f" mc {_fmt(tally.rate)}  analytic {_fmt(rf.p_fail)}"
        )
    row_fields = (
        channel.alpha,
        channel.p_total,
        args.scheme,
        1,
        circuit_depth(scheduled, cm).total,
        est.p_fail_x,
        est.p_fail_z,
        est.p_fail_total,
        est.shots,
        est.seed,
        est.ci_halfwidth,
    )
    emit.artifact(
        MC_CSV_HEADER + "\n" + ",".join(_fmt(v) for v in row_fields) + "\n"
    )
    return 0


def cmd_sweep(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    circuit = _resolve_circuit(args)
    _require_bare(circuit, "sweep")
    cm = _resolve_cost_model(args)
    alphas = parse_value_grid(args.alpha, "--alpha")
    p_totals = parse_value_grid(args.p_total, "--p-total")
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    try:
        levels_list = [int(v) for v in str(args.levels).split(",") if v.strip()]
    except ValueError:
        raise InvalidParameterError(f"--levels: bad list {args.levels!r}") from None
    rows = sweep(circuit, alphas, p_totals, schemes, levels_list, cm)
    emit.say(
        f"{len(rows)} rows: {len(alphas)} alpha x {len(p_totals)} p_total x "
        f"{len(schemes)} scheme(s) x {len(levels_list)} level(s)"
    )
    emit.artifact(rows_to_csv(rows))
    if getattr(args, "plot", False):
        from .plotting import plot_sweep

        target = _plot_target(args, ".png")
        plot_sweep(rows, target)
        emit.say(f"figure: {target}")
    return 0


def cmd_verify(args) -> int:
    emit = _Emitter(args.output, args.quiet)
    code = steane()
    checks: list[tuple[str, bool, str]] = []

    ok = verify_distance3(code)
    checks.append(("distance3", ok, "21 weight-1 corrected, 42 weight-2 logical"))

    pure_ok = True
    for error_type in ("X", "Z"):
        for error in range(1 << code.n):
            residual, logical = code.correct(error, error_type)
            if code.syndrome(residual, error_type) != 0:
                pure_ok = False
    checks.append(
        ("pure_type_decoding", pure_ok, "256 same-type subsets stay in {I, logical}")
    )

    rng = np.random.default_rng(args.seed)
    frames_ok = True
    for _ in range(args.trials):
        n = int(rng.integers(2, 5))
        steps = []
        for _ in range(int(rng.integers(1, 12))):
            if rng.random() < 0.5:
                a, b = rng.choice(n, size=2, replace=False)
                steps.append([LogicalOp("CX", (int(a), int(b)))])
            else:
                steps.append([])
        circuit = LogicalCircuit.from_partial(n, steps)
        if not verify_type_preservation(circuit):
            frames_ok = False
            break
    checks.append(
        (
            "type_preservation",
            frames_ok,
            f"{args.trials} random CX/WAIT circuits keep Z frames X-free",
        )
    )

    lines = ["check,result"]
    for name, ok, detail in checks:
        lines.append(f"{name},{'pass' if ok else 'fail'}")
        emit.say(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    emit.artifact("\n".join(lines) + "\n")
    return 0 if all(ok for _, ok, _ in checks) else 2


# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    raw = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        expanded = _expand_config(raw)
    except AceqecError as exc:
        print(f"aceqec: error: {exc}", file=sys.stderr)
        return 1
    parser = build_parser()
    try:
        args = parser.parse_args(expanded)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0
    try:
        return args.func(args)
    except AceqecError as exc:
        print(f"aceqec: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"aceqec: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - invariant violations
        print(f"aceqec: internal error: {exc!r}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
