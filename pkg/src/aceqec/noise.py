"""Pauli channels induced by relaxation and dephasing.

A qubit idling for time t under amplitude damping (T1) and pure dephasing
(T2) is twirled into a Pauli channel whose component probabilities are

    p_x = p_y = (1 - exp(-t/T1)) / 4
    p_z = (1 + exp(-t/T1) - 2 exp(-t/(2 T1) - 2 t/T2)) / 4

The asymmetry ratio alpha = (p_z + p_y) / (p_x + p_y) is approximately
2 T1 / T2 for short times, which in real hardware ranges from order 1
(trapped ions, NMR) to order 10^6 (isotopically purified silicon).

Note p_z(t) is not monotone: it climbs toward 1/2 while dephasing
dominates, peaks near t = (T2/2) ln(4 T1 / T2), then relaxes back to 1/4
as amplitude damping scrambles all components equally.  Only p_x and p_y
grow monotonically with t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateChannelError, InvalidParameterError

__all__ = [
    "DecoherenceParams",
    "PauliChannel",
    "SystemPreset",
    "PRESETS",
    "get_preset",
    "derive_channel",
    "asymmetry",
    "channel_from_total_and_alpha",
    "load_preset_table",
]


@dataclass(frozen=True)
class DecoherenceParams:
    """Relaxation time, dephasing time and the duration of one operation.

    All values are in seconds.  ``t2 <= 2 * t1`` is required physically;
    ``gate_time`` may be zero, which yields the identity channel.
    """

    t1: float
    t2: float
    gate_time: float

    def __post_init__(self) -> None:
        if not (self.t1 > 0 and math.isfinite(self.t1)):
            raise InvalidParameterError(f"t1 must be positive and finite, got {self.t1}")
        if not (self.t2 > 0 and math.isfinite(self.t2)):
            raise InvalidParameterError(f"t2 must be positive and finite, got {self.t2}")
        if self.t2 > 2 * self.t1:
            raise InvalidParameterError(
                f"t2 must not exceed 2*t1 (got t2={self.t2}, 2*t1={2 * self.t1})"
            )
        if not (self.gate_time >= 0 and math.isfinite(self.gate_time)):
            raise InvalidParameterError(
                f"gate_time must be non-negative and finite, got {self.gate_time}"
            )


@dataclass(frozen=True)
class PauliChannel:
    """Probabilities of the three non-trivial Pauli errors on one qubit."""

    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self) -> None:
        for name in ("p_x", "p_y", "p_z"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0) or not math.isfinite(v):
                raise InvalidParameterError(f"{name} must lie in [0, 1], got {v}")
        if self.p_total > 1.0 + 1e-15:
            raise InvalidParameterError(
                f"p_x + p_y + p_z must not exceed 1, got {self.p_total}"
            )

    @property
    def p_total(self) -> float:
        return self.p_x + self.p_y + self.p_z

    @property
    def p_i(self) -> float:
        """Probability of no error; the four components sum to 1 exactly."""
        return 1.0 - self.p_total

    @property
    def p_x_eff(self) -> float:
        """Probability of an X-type flip (X or Y)."""
        return self.p_x + self.p_y

    @property
    def p_z_eff(self) -> float:
        """Probability of a Z-type flip (Z or Y)."""
        return self.p_z + self.p_y

    @property
    def alpha(self) -> float:
        """Asymmetry ratio p_z_eff / p_x_eff; +inf for a phase-only channel."""
        if self.p_x_eff == 0.0:
            return math.inf
        return self.p_z_eff / self.p_x_eff


IDENTITY_CHANNEL = PauliChannel(0.0, 0.0, 0.0)


def derive_channel(params: DecoherenceParams) -> PauliChannel:
    """Twirl T1/T2 decoherence over time ``gate_time`` into a Pauli channel.

    Uses expm1-compensated forms so that the tiny p_x of highly biased
    systems (p_x ~ t/(4 T1), down to 1e-11 and below) keeps full relative
    precision.
    """
    t = params.gate_time
    if t == 0.0:
        return IDENTITY_CHANNEL
    a = t / params.t1
    b = t / (2.0 * params.t1) + 2.0 * t / params.t2
    # p_x = (1 - e^-a)/4 without cancellation.
    p_x = -math.expm1(-a) / 4.0
    # p_z = (1 + e^-a - 2 e^-b)/4 = ((1 - e^-b) + (e^-a - e^-b)) / 4.
    # b >= a always (since t2 <= 2 t1 implies 2t/t2 >= t/t1 >= t/(2 t1)),
    # so both summands are non-negative: no cancellation.  Writing the
    # second as -e^-a expm1(a - b) keeps it finite however far b runs
    # past a (t >> t2 overflows the naive e^(b-a)).
    p_z = (-math.expm1(-b) - math.exp(-a) * math.expm1(a - b)) / 4.0
    # Clamp tiny negative round-off and the t -> inf limits.
    p_x = min(max(p_x, 0.0), 0.25)
    p_z = min(max(p_z, 0.0), 0.5)
    return PauliChannel(p_x=p_x, p_y=p_x, p_z=p_z)


def asymmetry(channel: PauliChannel) -> float:
    """Ratio of Z-type to X-type error probability.

    Raises DegenerateChannelError when the channel has no X component at
    all (p_x + p_y = 0), e.g. the identity channel; use
    ``channel.alpha`` if an infinite result is acceptable.
    """
    if channel.p_x_eff == 0.0:
        raise DegenerateChannelError(
            "asymmetry undefined: channel has no X-type component"
        )
    return channel.p_z_eff / channel.p_x_eff


def channel_from_total_and_alpha(p_total: float, alpha: float) -> PauliChannel:
    """Build the canonical channel with given total rate and asymmetry.

    The convention is p_x = p_y = p_total / (2 alpha + 1) and
    p_z = (2 alpha - 1) * p_x, which makes p_z_eff / p_x_eff exactly
    ``alpha``.  Requires 0 < p_total < 1 and alpha >= 1/2 (alpha below
    1/2 would need a negative p_z).
    """
    if not (0.0 < p_total < 1.0):
        raise InvalidParameterError(f"p_total must lie in (0, 1), got {p_total}")
    if not (alpha >= 0.5 and math.isfinite(alpha)):
        raise InvalidParameterError(f"alpha must be finite and >= 0.5, got {alpha}")
    p_x = p_total / (2.0 * alpha + 1.0)
    p_z = (2.0 * alpha - 1.0) * p_x
    return PauliChannel(p_x=p_x, p_y=p_x, p_z=p_z)


@dataclass(frozen=True)
class SystemPreset:
    """A named hardware platform with representative T1 and T2 values.

    ``expected_alpha_order`` is the decade of 2 T1 / T2 the platform is
    known for; ``matches_order`` checks a derived asymmetry against it to
    within a factor of ten either way.
    """

    name: str
    t1: float
    t2: float
    expected_alpha_order: int

    @property
    def params(self) -> DecoherenceParams:
        """Reference operating point: one gate lasts T2 / 1000."""
        return DecoherenceParams(t1=self.t1, t2=self.t2, gate_time=self.t2 / 1000.0)

    @property
    def nominal_alpha(self) -> float:
        """Short-time asymmetry limit 2 T1 / T2."""
        return 2.0 * self.t1 / self.t2

    def matches_order(self, alpha: float) -> bool:
        """True when alpha agrees with the expected decade within 10x."""
        if not (alpha > 0 and math.isfinite(alpha)):
            return False
        return abs(math.log10(alpha) - self.expected_alpha_order) < 1.0


PRESETS: tuple[SystemPreset, ...] = (
    SystemPreset("P:Si", t1=3600.0, t2=1e-3, expected_alpha_order=6),
    SystemPreset("GaAs quantum dots", t1=1e-2, t2=1e-6, expected_alpha_order=4),
    SystemPreset("superconducting flux", t1=4e-6, t2=1e-7, expected_alpha_order=2),
    SystemPreset("trapped ions", t1=0.1, t2=1e-3, expected_alpha_order=2),
    SystemPreset("solid-state NMR", t1=60.0, t2=1.0, expected_alpha_order=2),
)


def _canonical_name(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch not in " -_")


def get_preset(name: str) -> SystemPreset:
    """Look up a preset; name matching ignores case, spaces and hyphens."""
    wanted = _canonical_name(name)
    for preset in PRESETS:
        if _canonical_name(preset.name) == wanted:
            return preset
    known = ", ".join(p.name for p in PRESETS)
    raise KeyError(f"unknown preset {name!r}; known presets: {known}")


def load_preset_table(path: str) -> list[SystemPreset]:
    """Read presets from a whitespace-separated table file.

    Line format: ``name t1 t2`` with an optional trailing integer column
    for the expected asymmetry decade; when absent the decade is derived
    from 2*t1/t2.  The name may contain spaces.  Blank lines and '#'
    comments are skipped.
    """

    def try_float(token: str) -> float | None:
        try:
            return float(token)
        except ValueError:
            return None

    presets: list[SystemPreset] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            fields = line.split()
            # A trailing bare integer is the optional decade column; a
            # float-looking last field (1e-3, 0.5) is t2 instead.
            order: int | None = None
            if (
                len(fields) >= 4
                and fields[-1].lstrip("+-").isdigit()
                and try_float(fields[-2]) is not None
                and try_float(fields[-3]) is not None
            ):
                order = int(fields[-1])
                fields = fields[:-1]
            if len(fields) < 3:
                raise InvalidParameterError(
                    f"{path}:{lineno}: expected 'name t1 t2 [order]', got {raw!r}"
                )
            t1, t2 = try_float(fields[-2]), try_float(fields[-1])
            if t1 is None or t2 is None:
                raise InvalidParameterError(
                    f"{path}:{lineno}: t1/t2 columns must be numbers, got {raw!r}"
                )
            name = " ".join(fields[:-2])
            if order is None:
                order = round(math.log10(2.0 * t1 / t2))
            presets.append(SystemPreset(name, t1=t1, t2=t2, expected_alpha_order=order))
    return presets
