"""Optimal discrimination strategies and analytic success probabilities.

Covers the Fourier family ``U_phi = H diag(1, e^{i phi}) H^dagger``, the
Hadamard special case, diamond-norm distances of qubit unitary channels and
measurements, and a Hahn-Jordan synthesizer for the final measurements.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, remainder, sin, sqrt
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import linalg
from .circuits import Circuit
from .errors import DegenerateDiscrimination, ValidationError
from .schemes import DiscriminationComponents

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
DEGENERACY_THRESHOLD = 1e-12
GRID_POINTS = 1024


def _check_unitary(u, name="u", shape=(2, 2)):
    u = linalg.as_cmat(u, name)
    if u.shape != shape:
        raise ValidationError(f"{name} must be {shape[0]}x{shape[1]}, got {u.shape}")
    if not linalg.is_unitary(u, 1e-10):
        raise ValidationError(f"{name} is not unitary")
    return u


def fourier_u(phi: float) -> np.ndarray:
    e = np.exp(1j * phi)
    return np.array([[(1 + e) / 2, (1 - e) / 2], [(1 - e) / 2, (1 + e) / 2]], dtype=complex)


def fourier_v0(phi: float) -> np.ndarray:
    a = (pi - phi) / 4
    return np.array([[1j * sin(a), -1j * cos(a)], [cos(a), sin(a)]], dtype=complex)


def fourier_v1(phi: float) -> np.ndarray:
    a = (pi - phi) / 4
    return np.array([[-1j * cos(a), 1j * sin(a)], [sin(a), cos(a)]], dtype=complex)


def fourier_p_succ(phi: float) -> float:
    """Optimal success probability ``1/2 + |1 - e^{i phi}| / 4``."""
    if not np.isfinite(phi):
        raise ValidationError(f"phi must be finite, got {phi}")
    # |1 - e^{i phi}| = 2 |sin(phi / 2)|; reducing first makes multiples of 2*pi exact
    return 0.5 + abs(sin(remainder(phi, 2 * pi) / 2)) / 2


@dataclass(frozen=True, eq=False)
class FourierComponents:
    phi: float
    u: np.ndarray
    v0: np.ndarray
    v1: np.ndarray
    discriminator: np.ndarray

    @property
    def p_succ(self) -> float:
        return fourier_p_succ(self.phi)


def fourier_components(phi: float) -> FourierComponents:
    """Optimal Bell-input strategy for P_{U_phi} versus P_I.

    With the Bell input, outcome ``i`` of P_U leaves the ancilla in
    ``conj(u_i)``, so the final measurements are the complex conjugates of
    ``fourier_v0``/``fourier_v1`` (those closed forms are optimal for the
    conjugate measurement ``U_{-phi}``, which has the same success probability).
    """
    return FourierComponents(
        phi, fourier_u(phi), fourier_v0(phi).conj(), fourier_v1(phi).conj(), BELL.copy()
    )


class HadamardComponents(NamedTuple):
    v0: np.ndarray
    v1: np.ndarray
    discriminator: np.ndarray
    p_succ: float


def hadamard_components() -> HadamardComponents:
    alpha, beta = cos(3 * pi / 8), sin(3 * pi / 8)
    v0 = np.array([[alpha, -beta], [beta, alpha]], dtype=complex)
    v1 = np.array([[-beta, alpha], [alpha, beta]], dtype=complex)
    return HadamardComponents(v0, v1, BELL.copy(), (2 + sqrt(2)) / 4)


def bell_preparation() -> Circuit:
    return Circuit(2).h(0).cnot(0, 1)


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal ``a (+) b`` with the first wire selecting the block."""
    return linalg.kron(linalg.P0, a) + linalg.kron(linalg.P1, b)


def components_from_matrices(u, v0, v1) -> DiscriminationComponents:
    """Bell-state components with U, V0, V1 given as matrices (generic gates)."""
    u, v0, v1 = _check_unitary(u), _check_unitary(v0, "v0"), _check_unitary(v1, "v1")
    v0d, v1d = linalg.dagger(v0), linalg.dagger(v1)
    return DiscriminationComponents(
        state_prep=bell_preparation(),
        u_dag=Circuit(1).u1(linalg.dagger(u), 0),
        v0_dag=Circuit(1).u1(v0d, 0),
        v1_dag=Circuit(1).u1(v1d, 0),
        v0_v1_direct_sum_dag=Circuit(2).u2(direct_sum(v0d, v1d)),
    )


def fourier_discrimination_components(phi: float) -> DiscriminationComponents:
    comps = fourier_components(phi)
    v0d, v1d = linalg.dagger(comps.v0), linalg.dagger(comps.v1)
    return DiscriminationComponents(
        state_prep=bell_preparation(),
        u_dag=Circuit(1).h(0).phase(-phi, 0).h(0),
        v0_dag=Circuit(1).u1(v0d, 0),
        v1_dag=Circuit(1).u1(v1d, 0),
        v0_v1_direct_sum_dag=Circuit(2).u2(direct_sum(v0d, v1d)),
    )


def hadamard_discrimination_components() -> DiscriminationComponents:
    """Gate-level components for U = H: V0 = RY(3pi/4) and V1 = RY(3pi/4) X."""
    theta = -3 * pi / 4
    return DiscriminationComponents(
        state_prep=bell_preparation(),
        u_dag=Circuit(1).h(0),
        v0_dag=Circuit(1).ry(theta, 0),
        v1_dag=Circuit(1).ry(theta, 0).x(0),
        v0_v1_direct_sum_dag=Circuit(2).ry(theta, 1).cnot(0, 1),
    )


def nu_min_numerical_range(u) -> float:
    """Distance from the origin to the numerical range of a normal 2x2 matrix.

    For normal matrices the numerical range is the segment joining the two
    eigenvalues.
    """
    u = linalg.as_cmat(u)
    if u.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 matrix, got {u.shape}")
    if not linalg.is_normal(u):
        raise ValidationError("numerical range is only supported for normal matrices")
    l0, l1 = np.linalg.eigvals(u)
    d = l1 - l0
    if abs(d) == 0:
        return float(abs(l0))
    t = min(1.0, max(0.0, -(np.conj(d) * l0).real / abs(d) ** 2))
    return float(abs(l0 + t * d))


def diamond_norm_unitary(u) -> float:
    """``|| Phi_U - Phi_I ||_diamond = 2 sqrt(1 - nu^2)`` with nu taken over W(U^dagger)."""
    u = _check_unitary(u)
    l0, l1 = np.linalg.eigvals(linalg.dagger(u))
    # Unit-modulus eigenvalues: the nearest point of their chord to the origin is
    # the midpoint, so 1 - nu^2 = |l0 - l1|^2 / 4. This avoids cancellation near nu = 1.
    return float(min(2.0, abs(l0 - l1)))


def diamond_norm_measurements(u) -> float:
    """Distance between von Neumann measurements P_U and P_I.

    Minimizes the unitary-channel distance of ``U diag(1, e^{i theta})`` over
    theta: a 1024-point grid followed by bounded refinement.
    """
    u = _check_unitary(u)

    def objective(theta):
        return diamond_norm_unitary(u @ np.diag([1.0, np.exp(1j * theta)]))

    step = 2 * pi / GRID_POINTS
    grid = np.arange(GRID_POINTS) * step
    values = np.array([objective(t) for t in grid])
    k = int(np.argmin(values))
    best = float(values[k])
    res = minimize_scalar(
        objective,
        bounds=(grid[k] - step, grid[k] + step),
        method="bounded",
        options={"xatol": 1e-10},
    )
    if res.success:
        best = min(best, float(res.fun))
    return best


def measure_and_prepare(u, rho) -> np.ndarray:
    """Apply ``P_U (x) id`` to a two-qubit density matrix (measured qubit first)."""
    u = _check_unitary(u)
    rho = linalg.as_cmat(rho, "rho")
    if rho.shape != (4, 4):
        raise ValidationError(f"rho must be 4x4, got {rho.shape}")
    if not linalg.is_hermitian(rho, 1e-9):
        raise ValidationError("rho is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-9:
        raise ValidationError("rho must have unit trace")
    if linalg.hermitian_eig(rho, 1e-9).eigenvalues[0] < -1e-9:
        raise ValidationError("rho is not positive semidefinite")
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        ket_i = np.eye(2)[:, [i]]
        kraus = np.kron(ket_i @ u[:, [i]].conj().T, linalg.I2)
        out += kraus @ rho @ kraus.conj().T
    return out


def exact_success_probability(u, discriminator, v0, v1) -> float:
    """Infinite-shot success probability of the conditional-measurement protocol.

    Both hypotheses are equally likely. The target is measured in the basis of
    U (or the computational basis); on outcome ``i`` the ancilla is measured in
    the basis of ``V_i`` and outcome 0 is read as "U".
    """
    u = _check_unitary(u)
    v = (_check_unitary(v0, "v0"), _check_unitary(v1, "v1"))
    psi = linalg.as_cvec(discriminator, "discriminator", normalized=True)
    if psi.shape != (4,):
        raise ValidationError("discriminator must be a two-qubit state")
    p = 0.0
    for basis, good_j in ((u, 0), (linalg.I2, 1)):
        for i in range(2):
            amps = np.kron(linalg.dagger(basis), linalg.dagger(v[i])) @ psi
            p += abs(amps[2 * i + good_j]) ** 2
    return p / 2


@dataclass(frozen=True, eq=False)
class SynthesizedStrategy:
    v0: np.ndarray
    v1: np.ndarray
    exact_p_succ: float
    diamond_distance: float


def hahn_jordan_difference(u, discriminator=BELL) -> np.ndarray:
    rho = linalg.projector(discriminator)
    return measure_and_prepare(u, rho) - measure_and_prepare(linalg.I2, rho)


def synthesize_strategy(u) -> SynthesizedStrategy:
    """Final measurements V0, V1 for the Bell discriminator from a Hahn-Jordan split.

    The output is optimal whenever the Bell state is an optimal input (the
    Fourier family and the Hadamard case); for other U it is still a valid
    strategy, optimal for the Bell input.
    """
    u = _check_unitary(u)
    diff = hahn_jordan_difference(u)
    if linalg.trace_norm(diff) < DEGENERACY_THRESHOLD:
        raise DegenerateDiscrimination("the measurements are identical; no strategy beats a coin flip")
    vs = []
    for i in range(2):
        block = diff[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]
        eig = linalg.hermitian_eig(block, 1e-9)
        # ascending order: column 1 spans the positive part, column 0 the negative part
        x_p, x_q = eig.eigenvectors[:, 1], eig.eigenvectors[:, 0]
        vs.append(np.column_stack([x_p, x_q]))
    p = exact_success_probability(u, BELL, vs[0], vs[1])
    return SynthesizedStrategy(vs[0], vs[1], p, 2 * (p - 0.5) * 2)
