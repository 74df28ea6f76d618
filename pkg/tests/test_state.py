import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_controlled, dense_permutation, dense_single, random_state, within_sigma
from djsim.errors import (
    AliasingError,
    NormalizationError,
    PermutationError,
    QubitCountError,
    QubitRangeError,
    UnitarityError,
)
from djsim.gates import gate
from djsim.state import (
    ShotHistogram,
    StateVector,
    apply_controlled,
    apply_permutation,
    apply_single,
    init_zero_state,
    marginal_probabilities,
    probabilities,
    sample_shots,
)

S2 = 1 / np.sqrt(2)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_init_zero_state(n):
    s = init_zero_state(n)
    expect = np.zeros(1 << n)
    expect[0] = 1
    np.testing.assert_array_equal(s.amplitudes, expect)


@pytest.mark.parametrize("n", [0, -1, 25, 2.5, True])
def test_init_size_errors(n):
    with pytest.raises(QubitCountError):
        init_zero_state(n)


def test_qubit_cap_env(monkeypatch):
    monkeypatch.setenv("DJSIM_MAX_QUBITS", "3")
    init_zero_state(3)
    with pytest.raises(QubitCountError):
        init_zero_state(4)


def test_hadamard_on_zero():
    s = apply_single(init_zero_state(1), gate("H"), 0)
    np.testing.assert_allclose(s.amplitudes, [S2, S2], atol=1e-15)
    np.testing.assert_allclose(probabilities(s), [0.5, 0.5], atol=1e-15)


def test_x_on_zero():
    s = apply_single(init_zero_state(1), gate("X"), 0)
    np.testing.assert_array_equal(s.amplitudes, [0, 1])


def test_hh_returns_zero():
    s = init_zero_state(1)
    apply_single(s, gate("H"), 0)
    apply_single(s, gate("H"), 0)
    np.testing.assert_allclose(s.amplitudes, [1, 0], atol=1e-15)


def test_apply_single_mutates_in_place():
    s = init_zero_state(2)
    buf = s.amplitudes
    out = apply_single(s, gate("X"), 1)
    assert out is s and s.amplitudes is buf
    np.testing.assert_array_equal(buf, [0, 0, 1, 0])


def test_apply_single_errors():
    s = init_zero_state(2)
    with pytest.raises(UnitarityError):
        apply_single(s, np.array([[1, 1], [0, 1]]), 0)
    with pytest.raises(QubitRangeError):
        apply_single(s, gate("X"), 2)
    with pytest.raises(QubitRangeError):
        apply_single(s, gate("X"), -1)


def test_cnot_basis_table():
    # |control=1, target=0> -> |11>;  basis index = control + 2 * target
    s = StateVector.basis(2, 0b01)
    apply_controlled(s, gate("X"), 0, 1)
    np.testing.assert_array_equal(s.amplitudes, [0, 0, 0, 1])
    s = StateVector.basis(2, 0b10)
    apply_controlled(s, gate("X"), 0, 1)
    np.testing.assert_array_equal(s.amplitudes, [0, 0, 1, 0])


def test_controlled_aliasing():
    with pytest.raises(AliasingError):
        apply_controlled(init_zero_state(2), gate("X"), 1, 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_single_matches_dense(rng, n):
    for q in range(n):
        psi = random_state(rng, n)
        for name, p in [("H", None), ("Y", None), ("S", None), ("Ry", 0.4), ("Rz", -1.3)]:
            g = gate(name, p)
            s = apply_single(StateVector(n, psi), g, q)
            np.testing.assert_allclose(s.amplitudes, dense_single(g.matrix, q, n) @ psi,
                                       atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_controlled_matches_dense(rng, n):
    for c in range(n):
        for t in range(n):
            if c == t:
                continue
            psi = random_state(rng, n)
            g = gate("Ry", 0.9) if (c + t) % 2 else gate("X")
            s = apply_controlled(StateVector(n, psi), g, c, t)
            np.testing.assert_allclose(s.amplitudes, dense_controlled(g.matrix, c, t, n) @ psi,
                                       atol=1e-12)


def test_permutation_identity_and_swap():
    s = init_zero_state(2)
    apply_permutation(s, np.arange(4))
    np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0])
    s = init_zero_state(1)
    apply_permutation(s, np.array([1, 0]))
    np.testing.assert_array_equal(s.amplitudes, [0, 1])


def test_permutation_matches_dense(rng):
    perm = rng.permutation(16)
    psi = random_state(rng, 4)
    s = apply_permutation(StateVector(4, psi), perm)
    np.testing.assert_array_equal(s.amplitudes, dense_permutation(perm) @ psi)


@pytest.mark.parametrize("perm", [[0, 0, 1, 2], [0, 1, 2], [0, 1, 2, 4], [0.0, 1.0, 2.0, 3.0]])
def test_permutation_errors(perm):
    with pytest.raises(PermutationError):
        apply_permutation(init_zero_state(2), np.array(perm))


def test_non_normalized_state_rejected():
    with pytest.raises(NormalizationError):
        StateVector(1, [1, 1])
    with pytest.raises(NormalizationError):
        StateVector(1, [np.nan, 0])


_ops = st.one_of(
    st.tuples(st.just("single"), st.sampled_from(["H", "X", "Y", "Z", "S", "Sdg"]),
              st.integers(0, 3), st.just(0)),
    st.tuples(st.just("rot"), st.sampled_from(["Ry", "Rz"]),
              st.integers(0, 3), st.floats(-7, 7)),
    st.tuples(st.just("cx"), st.integers(0, 3), st.integers(0, 3), st.just(0)),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(_ops, min_size=1, max_size=40))
def test_norm_preserved_over_sequences(ops):
    s = init_zero_state(4)
    for kind, a, b, theta in ops:
        if kind == "single":
            apply_single(s, gate(a), b)
        elif kind == "rot":
            apply_single(s, gate(a, theta), b)
        elif a != b:
            apply_controlled(s, gate("X"), a, b)
    assert abs(s.norm_squared() - 1) < 1e-10


def test_marginal_probabilities():
    # |q0 q1 q2> = |1, 0, 1>  -> index 5
    s = StateVector.basis(3, 5)
    p = marginal_probabilities(s, [0, 2])
    np.testing.assert_array_equal(p, [0, 0, 0, 1])
    p = marginal_probabilities(s, [1])
    np.testing.assert_array_equal(p, [1, 0])


def test_sample_deterministic_state():
    h = sample_shots(init_zero_state(1), 8000, 123)
    assert h.counts == {"0": 8000}


def test_sample_uniform_binomial():
    s = apply_single(init_zero_state(1), gate("H"), 0)
    h = sample_shots(s, 8000, 7)
    assert h["0"] + h["1"] == 8000
    assert within_sigma(h["0"], 8000, 0.5) and within_sigma(h["1"], 8000, 0.5)


def test_sample_same_seed_identical():
    s = StateVector(3, random_state(np.random.default_rng(0), 3))
    assert sample_shots(s, 5000, 42) == sample_shots(s, 5000, 42)
    assert sample_shots(s, 5000, 42) != sample_shots(s, 5000, 43)


def test_sample_follows_documented_stream():
    # outcome stream = first PCG64 child of SeedSequence(seed); inverse CDF per shot
    s = apply_single(init_zero_state(1), gate("H"), 0)
    child = np.random.SeedSequence(0).spawn(3)[0]
    u = np.random.Generator(np.random.PCG64(child)).random(1000)
    zeros = int(np.sum(u < 0.5))
    assert sample_shots(s, 1000, 0).counts == {"0": zeros, "1": 1000 - zeros}
    assert zeros == 504


def test_histogram_key_order_matches_bit_convention():
    # |q0, q1> = |1, 0> prints "01"
    h = sample_shots(StateVector.basis(2, 0b01), 10, 0)
    assert h.counts == {"01": 10}


@pytest.mark.parametrize("shots", [0, -5, 1.5])
def test_sample_shot_errors(shots):
    with pytest.raises(ValueError):
        sample_shots(init_zero_state(1), shots, 0)


def test_histogram_json():
    h = ShotHistogram({"11": 3, "00": 5}, 8, 9)
    text = h.to_json()
    assert json.loads(text) == {"shots": 8, "seed": 9, "counts": {"00": 5, "11": 3}}
    assert list(json.loads(text)["counts"]) == ["00", "11"]
    assert ShotHistogram.from_json(text) == h


def test_histogram_invariants():
    with pytest.raises(ValueError):
        ShotHistogram({"0": 3}, 4, 0)
    with pytest.raises(ValueError):
        ShotHistogram({"0": 2, "12": 2}, 4, 0)
