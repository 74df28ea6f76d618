"""Deutsch and Deutsch-Jozsa procedures, plus a classical query baseline."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .circuit import Circuit, run
from .errors import PromiseViolation, TruthTableError
from .oracle import FunctionClass, OracleCircuit, TruthTable, classify, synthesize_permutation
from .state import ShotHistogram, StateVector, bitstring, marginal_probabilities, sample_shots

VERDICT_TOL = 1e-10


@dataclass
class DJResult:
    verdict: FunctionClass
    first_register_outcome: str
    oracle_queries: int
    final_state: StateVector = field(repr=False)
    zero_probability: float = 1.0
    histogram: ShotHistogram | None = None

    def first_register_probabilities(self) -> np.ndarray:
        n = self.final_state.num_qubits - 1
        return marginal_probabilities(self.final_state, range(n))


@dataclass
class ClassicalResult:
    verdict: FunctionClass
    queries_used: int
    query_sequence: list[int]


def _as_oracle(oracle) -> OracleCircuit:
    if isinstance(oracle, TruthTable):
        return synthesize_permutation(oracle)
    return oracle


def dj_circuit(oracle: OracleCircuit) -> Circuit:
    """Preparation, one oracle call and the final Hadamard layer.

    The ancilla starts in |0>, so it is flipped with X before its Hadamard.
    Classical bit ``i`` records input qubit ``i``.
    """
    n = oracle.n
    c = Circuit(n + 1, n)
    c.x(n)
    c.h(n)
    for q in range(n):
        c.h(q)
    c.oracle(oracle.permutation)
    for q in range(n):
        c.h(q)
    for q in range(n):
        c.measure(q, q)
    return c


def deutsch_jozsa(oracle, n: int | None = None, shots: int | None = None,
                  seed: int = 0) -> DJResult:
    """Decide constant vs balanced with a single oracle application.

    ``oracle`` may be an :class:`OracleCircuit` or a :class:`TruthTable`.
    Raises :class:`PromiseViolation` when the all-zeros probability of the
    first register is neither 0 nor 1.
    """
    oracle = _as_oracle(oracle)
    if n is None:
        n = oracle.n
    if n != oracle.n:
        raise TruthTableError(f"oracle acts on {oracle.n} input bits, not {n}")
    circuit = dj_circuit(oracle)
    state = run(circuit)
    probs = marginal_probabilities(state, range(n))
    p0 = float(probs[0])
    if abs(p0 - 1.0) <= VERDICT_TOL:
        verdict = FunctionClass.CONSTANT
    elif p0 <= VERDICT_TOL:
        verdict = FunctionClass.BALANCED
    else:
        raise PromiseViolation(
            f"function is neither constant nor balanced: P(0...0) = {p0:.6g}", p0)
    # ties go to the lowest index, which argmax already does
    outcome = bitstring(int(np.argmax(probs)), n)
    hist = None
    if shots is not None:
        hist = sample_shots(state, shots, seed, qubits=range(n))
    return DJResult(verdict, outcome, circuit.oracle_queries, state, p0, hist)


def deutsch(oracle) -> DJResult:
    """The one-input-bit case, with the |0>|1> initial state."""
    oracle = _as_oracle(oracle)
    if oracle.n != 1:
        raise TruthTableError(f"Deutsch's algorithm needs a 1-bit oracle, got n={oracle.n}")
    c = Circuit(2, 1)
    c.x(1)
    c.h(0).h(1)
    c.oracle(oracle.permutation)
    c.h(0)
    c.measure(0, 0)
    state = run(c)
    p1 = float(marginal_probabilities(state, [0])[1])
    if p1 <= VERDICT_TOL:
        verdict, outcome = FunctionClass.CONSTANT, "0"
    elif abs(p1 - 1.0) <= VERDICT_TOL:
        verdict, outcome = FunctionClass.BALANCED, "1"
    else:
        raise PromiseViolation(f"first qubit is not deterministic: P(1) = {p1:.6g}", 1 - p1)
    return DJResult(verdict, outcome, c.oracle_queries, state, 1.0 - p1)


def first_register_amplitudes(state: StateVector) -> np.ndarray:
    """Input-register amplitudes once the ancilla factors as |->.

    The ancilla=0 half carries ``c_z / sqrt(2)``.
    """
    n = state.num_qubits - 1
    return state.amplitudes[: 1 << n] * np.sqrt(2.0)


def final_amplitudes_closed_form(t: TruthTable) -> np.ndarray:
    """``c_z = sum_x (-1)**(x.z + f(x)) / 2**n`` by direct summation."""
    n = t.n
    size = 1 << n
    f = t.as_array()
    x = np.arange(size)
    out = np.empty(size, dtype=np.complex128)
    for z in range(size):
        dot = np.zeros(size, dtype=np.int64)
        xz = x & z
        for i in range(n):
            dot ^= (xz >> i) & 1
        out[z] = np.sum(1 - 2 * ((dot + f) & 1)) / size
    return out


def classical_worst_case(n: int) -> int:
    return (1 << (n - 1)) + 1


def classical_baseline(oracle: TruthTable | Callable[[int], int], n: int | None = None,
                       strict: bool = True) -> ClassicalResult:
    """Deterministic classical strategy: query 0, 1, 2, ... until decided.

    Stops at the first output that differs from an earlier one (balanced)
    or after ``2**(n-1) + 1`` equal outputs (constant).  ``oracle`` may be a
    plain callable, in which case ``n`` is required.  With ``strict`` and a
    :class:`TruthTable`, a table outside the promise raises before any query
    is made.
    """
    if isinstance(oracle, TruthTable):
        n = oracle.n if n is None else n
        if strict and classify(oracle) is FunctionClass.NEITHER:
            raise PromiseViolation("function is neither constant nor balanced")
    if n is None or n < 1:
        raise TruthTableError("classical_baseline needs n >= 1 for a callable oracle")
    limit = classical_worst_case(n)
    seen: list[int] = []
    first = None
    for x in range(limit):
        y = int(oracle(x))
        seen.append(x)
        if first is None:
            first = y
        elif y != first:
            return ClassicalResult(FunctionClass.BALANCED, len(seen), seen)
    return ClassicalResult(FunctionClass.CONSTANT, len(seen), seen)
