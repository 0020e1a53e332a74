"""Monte Carlo sampling of the rectangle failure model, Pauli-frame
propagation, and stabilizer-code checks backing the type-preservation
assumption.

The sampler draws one uniform variate per physical fault location and
shot.  A location holds an X-effective fault (X or Y) with probability
p_x + p_y and a Z-effective fault (Y or Z) with probability p_y + p_z,
using one draw so the Y overlap is sampled jointly.  A shot fails in
type T when any T rectangle contains two or more T-effective faults;
this is the event the analytic pair rule bounds.

Determinism: shots are split on a fixed 8192-shot grid and chunk k uses
a fresh Philox stream keyed (seed, k), so results are bit-identical
across runs and across worker counts.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit import (
    DEFAULT_COST_MODEL,
    CostModel,
    LogicalCircuit,
    LogicalOp,
    extract_rectangles,
)
from .errors import InvalidParameterError, ScheduleError
from .noise import PauliChannel

__all__ = [
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

CHUNK_SHOTS = 8192


# ---------------------------------------------------------------------------
# Pauli frames over logical qubits


@dataclass(frozen=True)
class PauliFrame:
    """A Pauli error pattern on logical qubits as two bitmasks: bit q of
    x_bits (z_bits) set means an X (Z) component on qubit q.  Y is both."""

    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise InvalidParameterError(f"n_qubits must be >= 1, got {self.n_qubits}")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise InvalidParameterError("frame bits exceed qubit count")

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def weight(self) -> int:
        return (self.x_bits | self.z_bits).bit_count()


def propagate_pauli(frame: PauliFrame, op: LogicalOp) -> PauliFrame:
    """Conjugate the frame through one Clifford op.

    H swaps X and Z on its qubit; S maps X to Y (adds a Z component);
    CX copies X control-to-target and Z target-to-control.  Ideal EC
    blocks remove their component.  T is not a Clifford: a frame through
    T leaves the Pauli group, so it is rejected.
    """
    x, z = frame.x_bits, frame.z_bits
    if op.kind == "WAIT":
        return frame
    if op.kind == "H":
        (q,) = op.qubits
        bit = 1 << q
        xq, zq = x & bit, z & bit
        x = (x & ~bit) | zq
        z = (z & ~bit) | xq
    elif op.kind == "S":
        (q,) = op.qubits
        bit = 1 << q
        if x & bit:
            z ^= bit
    elif op.kind == "CX":
        c, t = op.qubits
        if x & (1 << c):
            x ^= 1 << t
        if z & (1 << t):
            z ^= 1 << c
    elif op.kind == "XEC":
        (q,) = op.qubits
        x &= ~(1 << q)
    elif op.kind == "ZEC":
        (q,) = op.qubits
        z &= ~(1 << q)
    else:
        raise ScheduleError(
            f"cannot propagate a Pauli frame through {op.kind}: not a "
            "Clifford op"
        )
    return PauliFrame(frame.n_qubits, x, z)


def verify_type_preservation(circuit: LogicalCircuit) -> bool:
    """True when no Z error injected anywhere in the circuit ever gains
    an X component.

    Holds exactly when the circuit is free of mixing gates: waits, CX and
    EC blocks keep the two components separate.  A single Z on each qubit
    is injected before every timestep and propagated to the end.
    """
    ops_flat = [op for step in circuit.steps for op in step]
    if any(op.kind == "T" for op in ops_flat):
        raise ScheduleError("T gates cannot be checked by frame propagation")
    for t0 in range(len(circuit.steps) + 1):
        for q in range(circuit.n_qubits):
            frame = PauliFrame(circuit.n_qubits, x_bits=0, z_bits=1 << q)
            for step in circuit.steps[t0:]:
                for op in step:
                    frame = propagate_pauli(frame, op)
                if frame.x_bits:
                    return False
    return True


# ---------------------------------------------------------------------------
# CSS stabilizer codes as qubit bitmasks


def _parity(mask: int) -> int:
    return mask.bit_count() & 1


@dataclass(frozen=True)
class StabilizerCode:
    """A CSS code over n physical qubits, generators as qubit bitmasks.

    x_stabilizers detect Z errors and z_stabilizers detect X errors (a
    generator anticommutes with an error iff their supports overlap on
    an odd number of qubits).  decode() implements minimum-weight lookup
    for a single-error-correcting code with the standard Hamming layout:
    the syndrome of a weight-1 error on qubit q reads q + 1.
    """

    n: int
    x_stabilizers: tuple[int, ...]
    z_stabilizers: tuple[int, ...]
    logical_x: int
    logical_z: int

    def __post_init__(self) -> None:
        limit = 1 << self.n
        for name in ("x_stabilizers", "z_stabilizers"):
            for mask in getattr(self, name):
                if not 0 < mask < limit:
                    raise InvalidParameterError(f"{name} mask {mask} out of range")
        for sx in self.x_stabilizers:
            for sz in self.z_stabilizers:
                if _parity(sx & sz):
                    raise InvalidParameterError(
                        f"X stabilizer {sx:#b} anticommutes with Z stabilizer {sz:#b}"
                    )
        for lx_name, lmask, others in (
            ("logical_x", self.logical_x, self.z_stabilizers),
            ("logical_z", self.logical_z, self.x_stabilizers),
        ):
            for s in others:
                if _parity(lmask & s):
                    raise InvalidParameterError(
                        f"{lx_name} {lmask:#b} anticommutes with stabilizer {s:#b}"
                    )
        if not _parity(self.logical_x & self.logical_z):
            raise InvalidParameterError(
                "logical X and Z must anticommute (odd overlap)"
            )

    def _detectors(self, error_type: str) -> tuple[int, ...]:
        if error_type == "X":
            return self.z_stabilizers
        if error_type == "Z":
            return self.x_stabilizers
        raise InvalidParameterError(f"error_type must be X or Z, got {error_type!r}")

    def syndrome(self, error: int, error_type: str) -> int:
        """Syndrome bits of a same-type error pattern, packed with
        generator i at bit i."""
        s = 0
        for i, stab in enumerate(self._detectors(error_type)):
            s |= _parity(error & stab) << i
        return s

    def decode(self, syndrome: int) -> int:
        """Correction mask for a syndrome: qubit (syndrome - 1)."""
        if not 0 <= syndrome < (1 << len(self.x_stabilizers)):
            raise InvalidParameterError(f"syndrome {syndrome} out of range")
        if syndrome == 0:
            return 0
        return 1 << (syndrome - 1)

    def correct(self, error: int, error_type: str) -> tuple[int, bool]:
        """Apply decode to an error pattern.

        Returns (residual, is_logical): the residual always has zero
        syndrome, so it is either a stabilizer element (harmless) or a
        representative of the logical class, decided by commutation with
        the opposite logical operator.
        """
        residual = error ^ self.decode(self.syndrome(error, error_type))
        partner = self.logical_z if error_type == "X" else self.logical_x
        return residual, bool(_parity(residual & partner))


def steane() -> StabilizerCode:
    """The [[7,1,3]] self-dual CSS code; generator supports are the
    Hamming(7,4) parity sets so syndromes address qubits directly."""
    masks = (0b1010101, 0b1100110, 0b1111000)
    return StabilizerCode(
        n=7,
        x_stabilizers=masks,
        z_stabilizers=masks,
        logical_x=0b1111111,
        logical_z=0b1111111,
    )


def verify_distance3(code: StabilizerCode) -> bool:
    """Exercise the decoder over every error it must handle.

    Checks that all single-qubit X, Z and Y errors are corrected cleanly
    and that every weight-2 same-type error decodes to a logical error,
    pinning the code distance at exactly 3.
    """
    for q in range(code.n):
        # Y errors decode as their X and Z components independently, so
        # covering both types covers all 21 single-qubit Paulis.
        for error_type in ("X", "Z"):
            _, logical = code.correct(1 << q, error_type)
            if logical:
                return False
    for a in range(code.n):
        for b in range(a + 1, code.n):
            for error_type in ("X", "Z"):
                _, logical = code.correct((1 << a) | (1 << b), error_type)
                if not logical:
                    return False
    return True


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass(frozen=True)
class RectangleTally:
    index: int
    error_type: str
    location_count: int
    failures: int
    rate: float
    ci_halfwidth: float


@dataclass(frozen=True)
class MCEstimate:
    shots: int
    seed: int
    p_fail_x: float
    p_fail_z: float
    p_fail_total: float
    ci_halfwidth: float
    failures_x: int
    failures_z: int
    failures_total: int
    per_rectangle: tuple[RectangleTally, ...]


def _ci_halfwidth(rate: float, shots: int) -> float:
    return 1.96 * math.sqrt(max(rate * (1.0 - rate), 0.0) / shots)


def mc_estimate(
    circuit: LogicalCircuit,
    channel: PauliChannel,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    shots: int = 100_000,
    seed: int = 0,
    n_jobs: int = 1,
) -> MCEstimate:
    """Sample physical faults jointly across all locations and score each
    rectangle by the two-or-more rule.

    Rectangles are indexed exactly as in the analytic report: all X
    rectangles in extraction order, then all Z.  Because every location's
    draw is shared by the rectangles covering it, correlations between
    rectangles that share bounding blocks are reproduced faithfully; the
    analytic product over rectangles ignores them, which is why it sits
    above the sampled whole-circuit rate.
    """
    if shots < 1:
        raise InvalidParameterError(f"shots must be >= 1, got {shots}")
    if n_jobs < 1:
        raise InvalidParameterError(f"n_jobs must be >= 1, got {n_jobs}")
    if seed < 0 or seed >= 1 << 63:
        raise InvalidParameterError("seed must fit a non-negative 63-bit integer")

    rects = [
        (rect.error_type, rect)
        for error_type in ("X", "Z")
        for rect in extract_rectangles(circuit, error_type, cost_model)
    ]

    # One contiguous index range of physical locations per circuit op.
    slices: dict[tuple[int, LogicalOp], tuple[int, int]] = {}
    n_locations = 0
    for t, step in enumerate(circuit.steps):
        for op in step:
            count = cost_model.locations(op)
            slices[(t, op)] = (n_locations, n_locations + count)
            n_locations += count
    rect_indices = []
    for _, rect in rects:
        idx = np.concatenate(
            [np.arange(*slices[key], dtype=np.intp) for key in rect.ops]
        )
        rect_indices.append(idx)

    p_x_eff = channel.p_x_eff
    z_lo, z_hi = channel.p_x, channel.p_total
    x_rows = [i for i, (et, _) in enumerate(rects) if et == "X"]
    z_rows = [i for i, (et, _) in enumerate(rects) if et == "Z"]

    n_chunks = -(-shots // CHUNK_SHOTS)

    x_row_set = frozenset(x_rows)

    def run_chunk(k: int) -> tuple[np.ndarray, int, int, int]:
        rows = min(CHUNK_SHOTS, shots - k * CHUNK_SHOTS)
        rng = np.random.Generator(np.random.Philox(key=[seed, k]))
        u = rng.random((rows, n_locations))
        eff_x = u < p_x_eff
        eff_z = (u >= z_lo) & (u < z_hi)
        fails = np.empty((len(rects), rows), dtype=bool)
        for i, idx in enumerate(rect_indices):
            eff = eff_x if i in x_row_set else eff_z
            fails[i] = eff[:, idx].sum(axis=1) >= 2
        any_x = fails[x_rows].any(axis=0) if x_rows else np.zeros(rows, dtype=bool)
        any_z = fails[z_rows].any(axis=0) if z_rows else np.zeros(rows, dtype=bool)
        return (
            fails.sum(axis=1),
            int(any_x.sum()),
            int(any_z.sum()),
            int((any_x | any_z).sum()),
        )

    per_rect = np.zeros(len(rects), dtype=np.int64)
    failures_x = failures_z = failures_total = 0
    if n_jobs == 1:
        results = list(map(run_chunk, range(n_chunks)))
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(run_chunk, range(n_chunks)))
    for counts, fx, fz, ft in results:
        per_rect += counts
        failures_x += fx
        failures_z += fz
        failures_total += ft

    tallies = tuple(
        RectangleTally(
            index=i,
            error_type=et,
            location_count=rect.location_count,
            failures=int(per_rect[i]),
            rate=per_rect[i] / shots,
            ci_halfwidth=_ci_halfwidth(per_rect[i] / shots, shots),
        )
        for i, (et, rect) in enumerate(rects)
    )
    rate_total = failures_total / shots
    return MCEstimate(
        shots=shots,
        seed=seed,
        p_fail_x=failures_x / shots,
        p_fail_z=failures_z / shots,
        p_fail_total=rate_total,
        ci_halfwidth=_ci_halfwidth(rate_total, shots),
        failures_x=failures_x,
        failures_z=failures_z,
        failures_total=failures_total,
        per_rectangle=tallies,
    )
