"""Dense statevector storage and in-place gate kernels.

Basis index ``k`` stores qubit ``q`` in bit ``q`` of ``k`` (qubit 0 is the
least significant bit).  Measured bitstrings are printed most significant
bit first, so the state ``|q0=1, q1=0>`` reads ``"01"``.

Sampling uses numpy's PCG64 bit generator.  A seed is expanded with
``numpy.random.SeedSequence(seed).spawn(3)`` into three independent child
streams: the outcome stream (one uniform per shot, inverse-CDF lookup), the
readout-flip stream and the depolarizing stream.  Noiseless and noisy
samplers share the outcome stream, which is what makes a zero-rate noise
model reproduce the noiseless histogram exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AliasingError,
    NormalizationError,
    PermutationError,
    QubitCountError,
    QubitRangeError,
    UnitarityError,
)
from .gates import GateMatrix, check_unitary

NORM_TOL = 1e-10
DEFAULT_MAX_QUBITS = 24

OUTCOME_STREAM, READOUT_STREAM, DEPOLARIZING_STREAM = range(3)


def max_qubits() -> int:
    """Qubit cap, overridable through ``DJSIM_MAX_QUBITS``."""
    raw = os.environ.get("DJSIM_MAX_QUBITS")
    if raw is None:
        return DEFAULT_MAX_QUBITS
    try:
        cap = int(raw)
    except ValueError:
        raise QubitCountError(f"DJSIM_MAX_QUBITS must be an integer, got {raw!r}") from None
    if cap < 1:
        raise QubitCountError(f"DJSIM_MAX_QUBITS must be >= 1, got {cap}")
    return cap


def seed_streams(seed: int) -> list[np.random.Generator]:
    """The three child generators derived from ``seed``, in stream order."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {seed!r}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    children = np.random.SeedSequence(int(seed)).spawn(3)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


class StateVector:
    """Unit-norm array of ``2**num_qubits`` complex amplitudes.

    Kernels mutate ``amplitudes`` in place. Use :meth:`copy` to branch.
    """

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes=None):
        _check_size(num_qubits)
        dim = 1 << num_qubits
        if amplitudes is None:
            amps = np.zeros(dim, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.array(amplitudes, dtype=np.complex128).reshape(-1)
            if amps.shape != (dim,):
                raise QubitCountError(
                    f"{num_qubits} qubits need {dim} amplitudes, got {amps.size}")
            if not np.all(np.isfinite(amps)):
                raise NormalizationError("amplitudes must be finite")
        self.num_qubits = num_qubits
        self.amplitudes = amps
        _check_norm(self)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = amps.size.bit_length() - 1
        if amps.size < 2 or amps.size != 1 << n:
            raise QubitCountError(f"amplitude count {amps.size} is not a power of two >= 2")
        return cls(n, amps)

    @classmethod
    def basis(cls, num_qubits: int, index: int) -> "StateVector":
        s = cls(num_qubits)
        if not 0 <= index < s.amplitudes.size:
            raise QubitRangeError(f"basis index {index} out of range for {num_qubits} qubits")
        s.amplitudes[0] = 0.0
        s.amplitudes[index] = 1.0
        return s

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amplitudes.copy())

    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def __len__(self):
        return self.amplitudes.size

    def __repr__(self):
        return f"StateVector(num_qubits={self.num_qubits})"


@dataclass
class ShotHistogram:
    """Outcome counts; keys are bitstrings printed most significant bit first."""

    counts: dict[str, int]
    shots: int
    seed: int
    num_bits: int = field(default=0)

    def __post_init__(self):
        if not self.num_bits and self.counts:
            self.num_bits = len(next(iter(self.counts)))
        if sum(self.counts.values()) != self.shots:
            raise ValueError("histogram counts do not sum to shots")
        for key, value in self.counts.items():
            if len(key) != self.num_bits or set(key) - {"0", "1"}:
                raise ValueError(f"bad histogram key {key!r}")
            if value < 0:
                raise ValueError(f"negative count for {key!r}")

    def __getitem__(self, key: str) -> int:
        return self.counts.get(key, 0)

    def frequency(self, key: str) -> float:
        return self[key] / self.shots

    def most_common(self) -> list[tuple[str, int]]:
        """Entries by count descending, ties broken by bitstring ascending."""
        return sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))

    def to_dict(self) -> dict:
        return {"shots": self.shots, "seed": self.seed,
                "counts": {k: self.counts[k] for k in sorted(self.counts)}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ShotHistogram":
        d = json.loads(text)
        return cls(dict(d["counts"]), int(d["shots"]), int(d["seed"]))


def _check_size(num_qubits):
    if isinstance(num_qubits, bool) or not isinstance(num_qubits, (int, np.integer)):
        raise QubitCountError(f"num_qubits must be an integer, got {num_qubits!r}")
    cap = max_qubits()
    if not 1 <= num_qubits <= cap:
        raise QubitCountError(f"num_qubits must be in [1, {cap}], got {num_qubits}")


def _check_qubit(state, q):
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 0 <= q < state.num_qubits:
        raise QubitRangeError(f"qubit {q!r} out of range for {state.num_qubits} qubits")


def _check_norm(state):
    drift = abs(state.norm_squared() - 1.0)
    # NaN fails the comparison as well
    if not drift < NORM_TOL:
        raise NormalizationError(f"state norm drifted by {drift:.3g}")


def init_zero_state(num_qubits: int) -> StateVector:
    return StateVector(num_qubits)


def _pair_view(amps, q):
    # axis 1 of the view is bit q; stride along it is 2**q
    return amps.reshape(-1, 2, 1 << q)


def _matrix_2x2(gate, what):
    # GateMatrix is checked for unitarity on construction; raw arrays here
    if isinstance(gate, GateMatrix):
        m = gate.matrix
    else:
        m = np.asarray(gate, dtype=np.complex128)
        if m.shape == (2, 2):
            check_unitary(m, name="matrix")
    if m.shape != (2, 2):
        raise UnitarityError(f"{what} must be 2x2, got {m.shape}")
    return m


def apply_single(state: StateVector, gate: GateMatrix | np.ndarray, q: int) -> StateVector:
    """Apply a 2x2 unitary to qubit ``q`` in place and return ``state``."""
    m = _matrix_2x2(gate, "single-qubit gate")
    _check_qubit(state, q)
    v = _pair_view(state.amplitudes, q)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
    v[:, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    _check_norm(state)
    return state


def apply_controlled(state: StateVector, gate: GateMatrix | np.ndarray,
                     control: int, target: int) -> StateVector:
    """Apply ``gate`` to ``target`` on the subspace where ``control`` is 1."""
    m = _matrix_2x2(gate, "controlled gate payload")
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise AliasingError(f"control and target are both qubit {control}")
    hi, lo = max(control, target), min(control, target)
    # axes: (above hi, bit hi, between, bit lo, below lo)
    v = state.amplitudes.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    if control == hi:
        a0, a1 = v[:, 1, :, 0, :].copy(), v[:, 1, :, 1, :]
        v[:, 1, :, 0, :] = m[0, 0] * a0 + m[0, 1] * a1
        v[:, 1, :, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    else:
        a0, a1 = v[:, 0, :, 1, :].copy(), v[:, 1, :, 1, :]
        v[:, 0, :, 1, :] = m[0, 0] * a0 + m[0, 1] * a1
        v[:, 1, :, 1, :] = m[1, 0] * a0 + m[1, 1] * a1
    _check_norm(state)
    return state


def check_permutation(perm, size: int) -> np.ndarray:
    p = np.asarray(perm)
    if p.shape != (size,) or not np.issubdtype(p.dtype, np.integer):
        raise PermutationError(f"permutation must be {size} integers")
    seen = np.zeros(size, dtype=bool)
    if p.min() < 0 or p.max() >= size:
        raise PermutationError("permutation entry out of range")
    seen[p] = True
    if not seen.all():
        raise PermutationError("permutation is not a bijection")
    return p


def apply_permutation(state: StateVector, perm) -> StateVector:
    """Move amplitude ``k`` to index ``perm[k]`` in place."""
    p = check_permutation(perm, state.amplitudes.size)
    state.amplitudes[p] = state.amplitudes.copy()
    return state


def probabilities(state: StateVector) -> np.ndarray:
    amps = state.amplitudes
    return amps.real ** 2 + amps.imag ** 2


def marginal_probabilities(state: StateVector, qubits) -> np.ndarray:
    """Distribution of the integer ``sum_i bit(qubits[i]) << i``."""
    qubits = list(qubits)
    for q in qubits:
        _check_qubit(state, q)
    p = probabilities(state)
    if qubits == list(range(state.num_qubits)):
        return p
    k = np.arange(p.size)
    idx = np.zeros(p.size, dtype=np.int64)
    for i, q in enumerate(qubits):
        idx |= ((k >> q) & 1) << i
    return np.bincount(idx, weights=p, minlength=1 << len(qubits))


def bitstring(value: int, width: int) -> str:
    return format(int(value), f"0{width}b")


def draw_outcomes(probs: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-CDF lookup of each uniform in ``[0, 1)``."""
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    out = np.searchsorted(cdf, uniforms, side="right")
    return np.minimum(out, probs.size - 1)


def counts_from_outcomes(outcomes: np.ndarray, width: int) -> dict[str, int]:
    values, counts = np.unique(outcomes, return_counts=True)
    return {bitstring(v, width): int(c) for v, c in zip(values, counts)}


def check_shots(shots):
    if isinstance(shots, bool) or not isinstance(shots, (int, np.integer)) or shots < 1:
        raise ValueError(f"shots must be a positive integer, got {shots!r}")


def sample_shots(state: StateVector, shots: int, seed: int, qubits=None) -> ShotHistogram:
    """Draw ``shots`` terminal measurements of ``qubits`` (default: all).

    Classical bit ``i`` of each key holds ``qubits[i]``; bit 0 is the
    rightmost character.
    """
    check_shots(shots)
    qubits = list(range(state.num_qubits)) if qubits is None else list(qubits)
    probs = marginal_probabilities(state, qubits)
    rng = seed_streams(seed)[OUTCOME_STREAM]
    outcomes = draw_outcomes(probs, rng.random(shots))
    return ShotHistogram(counts_from_outcomes(outcomes, len(qubits)), int(shots), int(seed),
                         len(qubits))
