"""Phenomenological readout and depolarizing noise.

Readout: every reported bit of every shot flips independently with
probability ``readout_flip``.  Flip decisions come from the readout child
stream as a ``(shots, bits)`` block of uniforms, so for a fixed seed the set
of flipped bits only grows as the rate grows.

Depolarizing: after each gate, with probability ``depolarizing``, every
qubit the gate touched receives a uniformly random Pauli from {I, X, Y, Z}
(one pure-state trajectory per shot).  Shots sharing the same error events
share one simulation.

The hardware runs report a dominant-outcome frequency ``d`` for a 3-bit
register; the readout rate reproducing it is ``1 - d ** (1/3)``, see
:func:`readout_rate_for_dominant`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, apply_instruction, run
from .gates import gate
from .state import (
    DEPOLARIZING_STREAM,
    OUTCOME_STREAM,
    READOUT_STREAM,
    ShotHistogram,
    StateVector,
    apply_single,
    check_shots,
    counts_from_outcomes,
    draw_outcomes,
    marginal_probabilities,
    seed_streams,
)

_PAULIS = ("I", "X", "Y", "Z")


@dataclass(frozen=True)
class NoiseModel:
    readout_flip: float = 0.0
    depolarizing: float = 0.0

    def __post_init__(self):
        for name in ("readout_flip", "depolarizing"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability in [0, 1], got {v!r}")
            object.__setattr__(self, name, float(v))

    @property
    def is_ideal(self) -> bool:
        return self.readout_flip == 0.0 and self.depolarizing == 0.0

    def to_dict(self) -> dict:
        return {"readout_flip": self.readout_flip, "depolarizing": self.depolarizing}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        unknown = set(d) - {"readout_flip", "depolarizing"}
        if unknown:
            raise ValueError(f"unknown noise keys: {', '.join(sorted(unknown))}")
        return cls(d.get("readout_flip", 0.0), d.get("depolarizing", 0.0))

    @classmethod
    def from_json(cls, text: str) -> "NoiseModel":
        d = json.loads(text)
        if not isinstance(d, dict):
            raise ValueError("noise config must be a JSON object")
        return cls.from_dict(d)


def readout_rate_for_dominant(dominant: float, bits: int = 3) -> float:
    """Per-bit flip rate giving a deterministic outcome frequency ``dominant``."""
    return 1.0 - dominant ** (1.0 / bits)


def apply_readout_flips(outcomes: np.ndarray, width: int, p: float,
                        rng: np.random.Generator) -> np.ndarray:
    u = rng.random((outcomes.size, width))
    weights = np.left_shift(1, np.arange(width, dtype=np.int64))
    masks = (u < p).astype(np.int64) @ weights
    return outcomes ^ masks


def _trajectory_events(circuit: Circuit, p: float, shots: int, rng: np.random.Generator):
    """Per-shot tuple of (instruction index, qubit, pauli index) error events."""
    steps = len(circuit.instructions)
    hit = rng.random((shots, steps)) < p
    events: list[tuple] = [()] * shots
    for s, i in zip(*np.nonzero(hit)):
        qubits = circuit.instructions[i].qubits
        paulis = rng.integers(0, 4, size=len(qubits))
        events[s] = events[s] + tuple((int(i), q, int(k)) for q, k in zip(qubits, paulis) if k)
    return events


def _ideal_snapshots(circuit: Circuit) -> list[StateVector]:
    snaps: list[StateVector] = []
    run(circuit, after=lambda _i, _ins, state: snaps.append(state.copy()))
    return snaps


def _run_trajectory(circuit: Circuit, events: tuple, snapshots) -> StateVector:
    by_step: dict[int, list] = {}
    for i, q, k in events:
        by_step.setdefault(i, []).append((q, k))
    if not by_step:
        return snapshots[-1]
    # everything before the first error is the ideal evolution
    first = min(by_step)
    state = snapshots[first].copy()
    for i in range(first, len(circuit.instructions)):
        if i > first:
            apply_instruction(state, circuit.instructions[i])
        for q, k in by_step.get(i, ()):
            apply_single(state, gate(_PAULIS[k]), q)
    return state


def sample_with_noise(source: StateVector | Circuit, model: NoiseModel, shots: int,
                      seed: int, qubits=None) -> ShotHistogram:
    """Sample ``shots`` measurements under ``model``.

    ``source`` is either a prepared state (readout noise only) or a circuit.
    For a circuit, ``qubits`` defaults to its measurement map; for a state,
    to every qubit.  A zero-rate model returns exactly what
    :func:`djsim.state.sample_shots` returns for the same seed.
    """
    check_shots(shots)
    streams = seed_streams(seed)
    if isinstance(source, Circuit):
        circuit = source
        if qubits is None:
            qubits = circuit.measured_qubits()
            if qubits is None:
                qubits = list(range(circuit.num_qubits))
    else:
        circuit = None
        if model.depolarizing > 0:
            raise ValueError("depolarizing noise needs the circuit, not a prepared state")
    qubits = list(range((circuit or source).num_qubits)) if qubits is None else list(qubits)
    width = len(qubits)

    uniforms = streams[OUTCOME_STREAM].random(shots)
    if circuit is not None and model.depolarizing > 0:
        events = _trajectory_events(circuit, model.depolarizing, shots,
                                    streams[DEPOLARIZING_STREAM])
        snapshots = _ideal_snapshots(circuit)
        groups: dict[tuple, list[int]] = {}
        for s, ev in enumerate(events):
            groups.setdefault(ev, []).append(s)
        outcomes = np.empty(shots, dtype=np.int64)
        for ev, members in groups.items():
            probs = marginal_probabilities(_run_trajectory(circuit, ev, snapshots), qubits)
            idx = np.array(members)
            outcomes[idx] = draw_outcomes(probs, uniforms[idx])
    else:
        state = run(circuit) if circuit is not None else source
        outcomes = draw_outcomes(marginal_probabilities(state, qubits), uniforms)

    if model.readout_flip > 0:
        outcomes = apply_readout_flips(outcomes, width, model.readout_flip,
                                       streams[READOUT_STREAM])
    return ShotHistogram(counts_from_outcomes(outcomes, width), int(shots), int(seed), width)
