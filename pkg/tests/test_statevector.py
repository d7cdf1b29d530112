import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from warmqite import oracles
from warmqite.instances import brute_force_summary, complete_graph, cost, generate_3regular
from warmqite.statevector import (
    SimulatorCeilingError,
    Statevector,
    ThetaMap,
    WarmStartState,
    apply_qite_circuit,
    apply_zyyz_rotation,
    canonical_pairs,
    dump_amplitudes,
    exact_imaginary_time,
    expectation_h,
    expectation_x,
    expectation_z,
    expectation_zz,
    init_warm_start,
    load_amplitudes,
    pair_index,
    sample,
    sample_bits,
    zyyz_matrix,
)

Z = oracles.PAULI["Z"]
Y = oracles.PAULI["Y"]


def random_state(n, rng, complex_=True):
    a = rng.normal(size=1 << n) + (1j * rng.normal(size=1 << n) if complex_ else 0)
    return Statevector(n, a / np.linalg.norm(a))


def dense_rotation(n, i, j, theta):
    return expm(-1j * theta * oracles.generator(n, i, j))


# --- warm start ---------------------------------------------------------------

def test_warm_start_pi_over_4_is_uniform():
    for z in [(0, 0, 0), (1, 0, 1), (1, 1, 1)]:
        s = init_warm_start(WarmStartState(z, math.pi / 4))
        np.testing.assert_allclose(s.amplitudes, np.full(8, 8**-0.5), atol=1e-15)


def test_warm_start_phi_zero_is_basis_state():
    z = (1, 0, 1, 1)
    s = init_warm_start(WarmStartState(z, 0.0))
    expected = np.zeros(16)
    expected[1 + 4 + 8] = 1.0
    np.testing.assert_array_equal(s.amplitudes, expected)


def test_warm_start_single_qubit():
    s = init_warm_start(WarmStartState((0,), math.pi / 8))
    np.testing.assert_allclose(s.amplitudes, [math.cos(math.pi / 8), math.sin(math.pi / 8)], atol=1e-15)


def test_warm_start_validates_phi():
    with pytest.raises(ValueError):
        WarmStartState((0, 1), 1.0)


def test_simulator_ceiling():
    with pytest.raises(SimulatorCeilingError):
        init_warm_start(WarmStartState((0,) * 25, 0.1))
    with pytest.raises(SimulatorCeilingError):
        init_warm_start(WarmStartState((0,) * 10, 0.1), ceiling=8)


# --- rotations ------------------------------------------------------------------

def test_zyyz_matrix_matches_expm():
    for theta in (0.0, 0.3, -1.1, 2.5):
        ref = expm(-1j * theta * (np.kron(Z, Y) + np.kron(Y, Z)))
        np.testing.assert_allclose(zyyz_matrix(theta), ref, atol=1e-14)


def test_zy_and_yz_rotations_commute():
    rng = np.random.default_rng(0)
    for theta in rng.normal(size=20):
        a = expm(-1j * theta * np.kron(Z, Y))
        b = expm(-1j * theta * np.kron(Y, Z))
        np.testing.assert_allclose(a @ b, b @ a, atol=1e-12)
        np.testing.assert_allclose(a @ b, zyyz_matrix(theta), atol=1e-12)


def test_rotation_zero_is_identity():
    rng = np.random.default_rng(1)
    s = random_state(5, rng)
    before = s.amplitudes.copy()
    apply_zyyz_rotation(s, 1, 3, 0.0)
    np.testing.assert_array_equal(s.amplitudes, before)


@pytest.mark.parametrize("i, j", [(0, 1), (2, 0), (1, 4), (3, 4), (0, 4)])
def test_rotation_matches_dense_exponential(i, j):
    rng = np.random.default_rng(i * 10 + j)
    s = random_state(5, rng)
    theta = float(rng.normal())
    expected = dense_rotation(5, i, j, theta) @ s.amplitudes
    apply_zyyz_rotation(s, i, j, theta)
    np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)


def test_rotation_on_bell_state_drives_odd_sector():
    theta = 0.2
    bell = Statevector(2, np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
    expected = dense_rotation(2, 0, 1, theta) @ bell.amplitudes
    apply_zyyz_rotation(bell, 0, 1, theta)
    np.testing.assert_allclose(bell.amplitudes, expected, atol=1e-14)
    # odd-parity component is (|01> + |10>)/sqrt2 with weight sin(2 theta)
    odd = (bell.amplitudes[1] + bell.amplitudes[2]) / math.sqrt(2)
    assert odd == pytest.approx(math.sin(2 * theta), abs=1e-14)
    assert bell.amplitudes[1] == pytest.approx(bell.amplitudes[2], abs=1e-15)


def test_rotation_rejects_bad_qubits():
    s = random_state(3, np.random.default_rng(0))
    with pytest.raises(IndexError):
        apply_zyyz_rotation(s, 0, 3, 0.1)
    with pytest.raises(ValueError):
        apply_zyyz_rotation(s, 1, 1, 0.1)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 9))
def test_rotation_preserves_norm(seed, n):
    rng = np.random.default_rng(seed)
    s = random_state(n, rng)
    i, j = rng.choice(n, size=2, replace=False)
    apply_zyyz_rotation(s, int(i), int(j), float(rng.normal() * 3))
    assert s.norm() == pytest.approx(1.0, abs=1e-10)


# --- circuit --------------------------------------------------------------------

def test_pair_index_is_lexicographic():
    for n in (2, 5, 9):
        for k, (i, j) in enumerate(canonical_pairs(n)):
            assert pair_index(i, j, n) == k


def test_circuit_zero_is_identity():
    s = random_state(6, np.random.default_rng(2))
    before = s.amplitudes.copy()
    apply_qite_circuit(s, ThetaMap.zeros(6))
    np.testing.assert_array_equal(s.amplitudes, before)


def test_circuit_single_angle_equals_single_rotation():
    rng = np.random.default_rng(3)
    a = random_state(7, rng)
    b = a.copy()
    apply_qite_circuit(a, ThetaMap.from_dict(7, {(2, 5): 0.4}))
    apply_zyyz_rotation(b, 2, 5, 0.4)
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 5, 9, 11])
def test_circuit_equals_sequential_rotations(n):
    rng = np.random.default_rng(n)
    theta = ThetaMap(n, rng.normal(size=n * (n - 1) // 2))
    a = random_state(n, rng, complex_=False)
    b = a.copy()
    apply_qite_circuit(a, theta)
    for (i, j), t in theta:
        apply_zyyz_rotation(b, i, j, t)
    np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)


def test_circuit_equals_dense_ordered_product():
    n = 5
    rng = np.random.default_rng(11)
    theta = ThetaMap(n, rng.normal(size=10) * 0.5)
    s = random_state(n, rng)
    expected = s.amplitudes.copy()
    for (i, j), t in theta:  # first pair acts first
        expected = dense_rotation(n, i, j, t) @ expected
    apply_qite_circuit(s, theta)
    np.testing.assert_allclose(s.amplitudes, expected, atol=1e-12)


def test_circuit_skips_tiny_angles():
    n = 4
    s = random_state(n, np.random.default_rng(4))
    before = s.amplitudes.copy()
    apply_qite_circuit(s, ThetaMap(n, np.full(6, 1e-15)))
    np.testing.assert_array_equal(s.amplitudes, before)


def test_circuit_norm_n10():
    rng = np.random.default_rng(10)
    s = init_warm_start(WarmStartState(tuple(rng.integers(0, 2, 10)), 0.3))
    apply_qite_circuit(s, ThetaMap(10, rng.normal(size=45)))
    assert s.norm() == pytest.approx(1.0, abs=1e-10)


def test_circuit_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_qite_circuit(random_state(3, np.random.default_rng(0)), ThetaMap.zeros(4))


# --- expectations ---------------------------------------------------------------

def test_expectation_examples():
    s = init_warm_start(WarmStartState((0, 1, 0), math.pi / 8))
    assert expectation_z(s, 1) == pytest.approx(-math.cos(math.pi / 4), abs=1e-12)
    assert expectation_z(s, 1) == pytest.approx(-0.70711, abs=1e-5)
    assert expectation_x(s, 2) == pytest.approx(math.sin(math.pi / 4), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(bits=st.lists(st.integers(0, 1), min_size=1, max_size=9),
       phi=st.floats(0.0, math.pi / 4))
def test_warm_start_expectations_closed_form(bits, phi):
    s = init_warm_start(WarmStartState(tuple(bits), phi))
    for i, b in enumerate(bits):
        assert expectation_z(s, i) == pytest.approx((-1) ** b * math.cos(2 * phi), abs=1e-12)
        assert expectation_x(s, i) == pytest.approx(math.sin(2 * phi), abs=1e-12)


def test_expectations_match_dense_operators():
    rng = np.random.default_rng(6)
    s = random_state(4, rng)
    for i in range(4):
        assert expectation_z(s, i) == pytest.approx(oracles.dense_expectation(s, {i: "Z"}), abs=1e-12)
        assert expectation_x(s, i) == pytest.approx(oracles.dense_expectation(s, {i: "X"}), abs=1e-12)
        for j in range(4):
            if i != j:
                ref = oracles.dense_expectation(s, {i: "Z", j: "Z"})
                assert expectation_zz(s, i, j) == pytest.approx(ref, abs=1e-12)


def test_expectation_h_on_basis_state_is_cost():
    g = generate_3regular(8, np.random.default_rng(2))
    rng = np.random.default_rng(3)
    for _ in range(10):
        z = tuple(int(b) for b in rng.integers(0, 2, 8))
        assert expectation_h(Statevector.basis(z), g) == pytest.approx(cost(g, z), abs=1e-12)


# --- sampling -------------------------------------------------------------------

def test_sample_basis_state():
    z = (1, 0, 1, 1, 0)
    out = sample(Statevector.basis(z), 50, np.random.default_rng(0))
    assert out == [z] * 50


def test_sample_uniform_marginals():
    n, shots = 6, 40_000
    s = init_warm_start(WarmStartState((0,) * n, math.pi / 4))
    freq = sample_bits(s, shots, np.random.default_rng(1)).mean(axis=0)
    sigma = math.sqrt(0.25 / shots)
    assert np.all(np.abs(freq - 0.5) < 4 * sigma)


def test_sample_warm_start_flip_rate():
    n, shots, phi = 7, 40_000, 0.4
    z = (1, 0, 0, 1, 1, 0, 1)
    s = init_warm_start(WarmStartState(z, phi))
    flips = (sample_bits(s, shots, np.random.default_rng(2)) != np.array(z)).mean(axis=0)
    p = math.sin(phi) ** 2
    assert np.all(np.abs(flips - p) < 4 * math.sqrt(p * (1 - p) / shots))


def test_sample_reproducible():
    s = init_warm_start(WarmStartState((0, 1, 1, 0), 0.5))
    a = sample(s, 100, np.random.default_rng(9))
    b = sample(s, 100, np.random.default_rng(9))
    assert a == b


def test_sample_rejects_zero_shots():
    with pytest.raises(ValueError):
        sample(Statevector.basis((0,)), 0, np.random.default_rng(0))


# --- imaginary time reference ---------------------------------------------------

def test_imaginary_time_zero_is_identity():
    g = generate_3regular(6, np.random.default_rng(0))
    s = init_warm_start(WarmStartState((0,) * 6, 0.3))
    np.testing.assert_allclose(exact_imaginary_time(s, g, 0.0).amplitudes, s.amplitudes, atol=1e-15)


def test_imaginary_time_converges_to_optima():
    g = generate_3regular(8, np.random.default_rng(1))
    summary = brute_force_summary(g)
    s = init_warm_start(WarmStartState((0,) * 8, math.pi / 4))
    probs = exact_imaginary_time(s, g, 40.0).probabilities()
    opt_idx = [sum(b << i for i, b in enumerate(z)) for z in summary.optima]
    np.testing.assert_allclose(probs[opt_idx], 1.0 / len(opt_idx), atol=1e-12)
    assert probs.sum() == pytest.approx(1.0)


def test_imaginary_time_derivative_finite_difference():
    g = generate_3regular(8, np.random.default_rng(2))
    rng = np.random.default_rng(3)
    for _ in range(5):
        s = random_state(8, rng)
        h = oracles.hamiltonian(g).real.diagonal()
        p = s.probabilities()
        mean, second = p @ h, p @ h**2
        step = 1e-6
        fd = (expectation_h(exact_imaginary_time(s, g, step), g) - expectation_h(s, g)) / step
        assert fd == pytest.approx(-2 * (second - mean**2), rel=1e-4)


def test_imaginary_time_lowers_energy():
    g = generate_3regular(8, np.random.default_rng(4))
    rng = np.random.default_rng(5)
    for _ in range(20):
        s = random_state(8, rng)
        e0 = expectation_h(s, g)
        for tau in (0.01, 0.1, 1.0):
            assert expectation_h(exact_imaginary_time(s, g, tau), g) < e0


def test_dump_roundtrip(tmp_path):
    s = init_warm_start(WarmStartState((1, 0, 1), 0.2))
    path = tmp_path / "state.bin"
    dump_amplitudes(s, path)
    assert path.stat().st_size == 4 + 16 * 8
    back = load_amplitudes(path)
    assert back.n == 3
    np.testing.assert_array_equal(back.amplitudes.real, s.amplitudes)
