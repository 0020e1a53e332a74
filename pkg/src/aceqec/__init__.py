"""Asymmetric correction of errors for concatenated CSS codes.

When Z errors dominate X errors (as they do whenever T2 is much shorter
than 2 T1), correcting both types equally often wastes time and fault
locations.  This package schedules X correction sparsely, quantifies the
resulting extended-rectangle failure probabilities analytically and by
Monte Carlo, and verifies the type-preservation assumption on the Steane
[[7,1,3]] code.
"""

from .ace import (
    DEFAULT_POLICY,
    AcePolicy,
    Replacement,
    ace_schedule,
    apply_ace,
    conventional_schedule,
    insert_xec_step,
    no_x_schedule,
    split_boundaries,
)
from .analysis import (
    CSV_HEADER,
    ConcatenationResult,
    FailureReport,
    LevelResult,
    NoXComparison,
    RectangleFailure,
    SweepRow,
    calibrate_ec_locations,
    circuit_failure,
    concatenated_failure,
    composed_depth,
    crossover_alpha,
    logical_channel,
    no_x_limit,
    rebalance,
    rebalanced_schedule,
    rectangle_failure,
    rows_to_csv,
    schedule_with,
    sweep,
    unit_cell,
    unit_op_failure,
)
from .circuit import (
    DEFAULT_COST_MODEL,
    KIND_ARITY,
    CostModel,
    DepthReport,
    ExtendedRectangle,
    LogicalCircuit,
    LogicalOp,
    depth,
    extract_rectangles,
    insert_conventional_ec,
    parse_circuit,
    serialize_circuit,
    strip_corrections,
)
from .errors import (
    AceqecError,
    CircuitFormatError,
    DegenerateChannelError,
    InfeasibleError,
    InvalidParameterError,
    ScheduleError,
)
from .noise import (
    IDENTITY_CHANNEL,
    PRESETS,
    DecoherenceParams,
    PauliChannel,
    SystemPreset,
    asymmetry,
    channel_from_total_and_alpha,
    derive_channel,
    get_preset,
    load_preset_table,
)
from .simulate import (
    MCEstimate,
    PauliFrame,
    RectangleTally,
    StabilizerCode,
    mc_estimate,
    propagate_pauli,
    steane,
    verify_distance3,
    verify_type_preservation,
)
from .templates import TEMPLATES, get_template

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "AceqecError",
    "CircuitFormatError",
    "DegenerateChannelError",
    "InfeasibleError",
    "InvalidParameterError",
    "ScheduleError",
    # noise
    "DecoherenceParams",
    "PauliChannel",
    "IDENTITY_CHANNEL",
    "derive_channel",
    "asymmetry",
    "channel_from_total_and_alpha",
    "SystemPreset",
    "PRESETS",
    "get_preset",
    "load_preset_table",
    # circuit
    "LogicalOp",
    "LogicalCircuit",
    "CostModel",
    "DEFAULT_COST_MODEL",
    "KIND_ARITY",
    "ExtendedRectangle",
    "DepthReport",
    "parse_circuit",
    "serialize_circuit",
    "insert_conventional_ec",
    "strip_corrections",
    "extract_rectangles",
    "depth",
    # templates
    "TEMPLATES",
    "get_template",
    # ace
    "AcePolicy",
    "Replacement",
    "DEFAULT_POLICY",
    "apply_ace",
    "split_boundaries",
    "insert_xec_step",
    "conventional_schedule",
    "ace_schedule",
    "no_x_schedule",
    # analysis
    "rectangle_failure",
    "RectangleFailure",
    "FailureReport",
    "circuit_failure",
    "logical_channel",
    "unit_cell",
    "unit_op_failure",
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
    # simulate
    "PauliFrame",
    "propagate_pauli",
    "StabilizerCode",
    "steane",
    "verify_distance3",
    "verify_type_preservation",
    "RectangleTally",
    "MCEstimate",
    "mc_estimate",
]
