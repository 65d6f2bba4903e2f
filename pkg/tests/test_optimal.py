from math import cos, pi, sin, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qdisc import linalg
from qdisc.errors import DegenerateDiscrimination, ValidationError
from qdisc.optimal import (
    BELL,
    diamond_norm_measurements,
    diamond_norm_unitary,
    exact_success_probability,
    fourier_components,
    fourier_p_succ,
    fourier_u,
    fourier_v0,
    fourier_v1,
    hadamard_components,
    hahn_jordan_difference,
    measure_and_prepare,
    nu_min_numerical_range,
    synthesize_strategy,
)

from conftest import random_density, random_unitary

ALPHA, BETA = cos(3 * pi / 8), sin(3 * pi / 8)


def column_projectors(v):
    return [np.outer(v[:, k], v[:, k].conj()) for k in range(2)]


def reduced_ancilla(u, i, rho):
    """Unnormalised ancilla state after outcome i of P_U on the first qubit."""
    proj = np.kron(np.outer(u[:, i], u[:, i].conj()), linalg.I2)
    full = (proj @ rho @ proj).reshape(2, 2, 2, 2)
    return np.einsum("abcb->ac", full.transpose(1, 0, 3, 2))


def test_fourier_closed_forms():
    assert np.allclose(fourier_u(0), linalg.I2)
    assert np.allclose(fourier_u(pi), linalg.X)
    assert np.allclose(fourier_v0(pi), [[0, -1j], [1, 0]])
    assert np.allclose(fourier_v1(pi), [[-1j, 0], [0, 1]])
    for phi in np.linspace(0, 2 * pi, 9):
        h, d = linalg.H, np.diag([1, np.exp(1j * phi)])
        assert np.allclose(fourier_u(phi), h @ d @ h, atol=1e-14)


def test_fourier_p_succ_values():
    assert fourier_p_succ(0) == 0.5
    assert fourier_p_succ(pi) == 1.0
    assert fourier_p_succ(2 * pi) == 0.5
    assert fourier_p_succ(pi / 2) == pytest.approx(0.5 + sqrt(2) / 4, abs=1e-15)
    with pytest.raises(ValidationError):
        fourier_p_succ(float("nan"))


@given(st.floats(0, 2 * pi))
def test_fourier_p_succ_symmetry_and_formula(phi):
    p = fourier_p_succ(phi)
    assert 0.5 <= p <= 1.0
    assert p == pytest.approx(fourier_p_succ(2 * pi - phi), abs=1e-15)
    assert p == pytest.approx(0.5 + abs(1 - np.exp(1j * phi)) / 4, abs=1e-15)


def test_fourier_components_are_optimal(rng):
    for phi in rng.uniform(0, 2 * pi, 100):
        c = fourier_components(phi)
        assert exact_success_probability(c.u, c.discriminator, c.v0, c.v1) == pytest.approx(c.p_succ, abs=1e-12)


def test_verbatim_closed_forms_serve_the_conjugate_family(rng):
    for phi in rng.uniform(0, 2 * pi, 50):
        p = exact_success_probability(fourier_u(-phi), BELL, fourier_v0(phi), fourier_v1(phi))
        assert p == pytest.approx(fourier_p_succ(phi), abs=1e-12)


def test_hadamard_strategy():
    h = hadamard_components()
    assert h.p_succ == pytest.approx(0.8535533905932737, abs=1e-15)
    assert exact_success_probability(linalg.H, h.discriminator, h.v0, h.v1) == pytest.approx(h.p_succ, abs=1e-12)
    ry = lambda t: np.array([[cos(t / 2), -sin(t / 2)], [sin(t / 2), cos(t / 2)]])
    assert np.allclose(h.v0, ry(3 * pi / 4))
    assert np.allclose(h.v1, ry(3 * pi / 4) @ linalg.X)
    assert ALPHA == pytest.approx(sqrt(2 - sqrt(2)) / 2) and BETA == pytest.approx(sqrt(2 + sqrt(2)) / 2)


def test_nu_values():
    assert nu_min_numerical_range(linalg.I2) == 1.0
    assert nu_min_numerical_range(np.diag([1, -1])) == pytest.approx(0.0, abs=1e-15)
    assert nu_min_numerical_range(linalg.dagger(fourier_u(pi / 2))) == pytest.approx(sqrt(2) / 2, abs=1e-12)
    with pytest.raises(ValidationError):
        nu_min_numerical_range(np.array([[1, 1], [0, 1]]))


def test_diamond_norm_unitary_grid():
    for phi in np.linspace(0, 2 * pi, 100):
        assert abs(diamond_norm_unitary(fourier_u(phi)) - abs(1 - np.exp(1j * phi))) <= 1e-12


def test_diamond_norm_unitary_matches_nu(rng):
    for _ in range(50):
        u = random_unitary(rng)
        nu = nu_min_numerical_range(linalg.dagger(u))
        assert diamond_norm_unitary(u) == pytest.approx(2 * sqrt(max(0.0, 1 - nu**2)), abs=1e-7)


def test_diamond_norm_measurements():
    assert diamond_norm_measurements(linalg.H) == pytest.approx(sqrt(2), abs=1e-9)
    assert diamond_norm_measurements(linalg.I2) == pytest.approx(0.0, abs=1e-9)
    assert diamond_norm_measurements(linalg.X) == pytest.approx(2.0, abs=1e-9)
    # diagonal phases do not change a von Neumann measurement
    assert diamond_norm_measurements(np.diag([1, 1j])) == pytest.approx(0.0, abs=1e-9)


def test_measure_and_prepare_examples():
    rho = linalg.projector(BELL)
    out = measure_and_prepare(linalg.I2, rho)
    assert np.allclose(out, np.diag([0.5, 0, 0, 0.5]))
    out = measure_and_prepare(linalg.H, rho)
    assert np.trace(out).real == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        measure_and_prepare(linalg.I2, np.eye(4))


def test_hahn_jordan_ingredient_matches_reduced_states(rng):
    rho = linalg.projector(BELL)
    for _ in range(10):
        u = random_unitary(rng)
        x = hahn_jordan_difference(u)
        for i in range(2):
            expected = reduced_ancilla(u, i, rho) - reduced_ancilla(linalg.I2, i, rho)
            assert np.allclose(x[2 * i : 2 * i + 2, 2 * i : 2 * i + 2], expected, atol=1e-12)
        assert np.allclose(x[:2, 2:], 0) and abs(np.trace(x)) < 1e-12


def test_measure_and_prepare_trace_preserving(rng):
    for _ in range(20):
        out = measure_and_prepare(random_unitary(rng), random_density(rng, 4))
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        assert linalg.hermitian_eig(out).eigenvalues[0] > -1e-12


def test_synthesizer_hadamard_projectors():
    s = synthesize_strategy(linalg.H)
    h = hadamard_components()
    for got, want in zip(column_projectors(s.v0) + column_projectors(s.v1), column_projectors(h.v0) + column_projectors(h.v1)):
        assert np.allclose(got, want, atol=1e-9)
    assert s.exact_p_succ == pytest.approx(h.p_succ, abs=1e-12)
    assert s.diamond_distance == pytest.approx(sqrt(2), abs=1e-12)


def test_synthesizer_fourier(rng):
    s = synthesize_strategy(fourier_u(pi / 2))
    assert s.exact_p_succ == pytest.approx(0.5 + sqrt(2) / 4, abs=1e-12)
    for phi in rng.uniform(0.1, 2 * pi - 0.1, 20):
        s = synthesize_strategy(fourier_u(phi))
        c = fourier_components(phi)
        for got, want in zip(column_projectors(s.v0) + column_projectors(s.v1), column_projectors(c.v0) + column_projectors(c.v1)):
            assert np.allclose(got, want, atol=1e-9)


def test_synthesizer_degenerate():
    with pytest.raises(DegenerateDiscrimination):
        synthesize_strategy(linalg.I2)
    with pytest.raises(DegenerateDiscrimination):
        synthesize_strategy(np.diag([1, -1j]))


def test_helstrom_consistency(rng):
    for phi in rng.uniform(0, 2 * pi, 20):
        u = fourier_u(phi)
        assert 0.5 + diamond_norm_measurements(u) / 4 == pytest.approx(fourier_p_succ(phi), abs=1e-9)
        assert 0.5 + linalg.trace_norm(hahn_jordan_difference(u)) / 4 == pytest.approx(fourier_p_succ(phi), abs=1e-9)


def test_no_strategy_beats_helstrom(rng):
    for _ in range(100):
        u = random_unitary(rng)
        ceiling = 0.5 + diamond_norm_measurements(u) / 4
        p = exact_success_probability(u, BELL, random_unitary(rng), random_unitary(rng))
        assert 0.0 <= p <= ceiling + 1e-9
        assert synthesize_strategy(u).exact_p_succ <= ceiling + 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(0.01, 2 * pi - 0.01))
def test_synthesizer_is_optimal_for_fourier(phi):
    s = synthesize_strategy(fourier_u(phi))
    assert s.exact_p_succ == pytest.approx(fourier_p_succ(phi), abs=1e-9)
    assert linalg.is_unitary(s.v0) and linalg.is_unitary(s.v1)
