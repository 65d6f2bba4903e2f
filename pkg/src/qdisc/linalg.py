"""Small dense complex linear algebra for 2x2 and 4x4 matrices.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The helpers here
validate shapes and finiteness and fix the conventions the rest of the package
relies on (Kronecker ordering, eigenvector phases).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

SUPPORTED_DIMS = (2, 4)

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def as_cmat(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite complex matrix with rows and cols in {2, 4}."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] not in SUPPORTED_DIMS or m.shape[1] not in SUPPORTED_DIMS:
        raise ValidationError(f"{name} must be 2x2, 2x4, 4x2 or 4x4, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} has non-finite entries")
    return m


def as_cvec(v, name: str = "vector", normalized: bool = False, tol: float = 1e-10) -> np.ndarray:
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if vec.shape[0] not in SUPPORTED_DIMS:
        raise ValidationError(f"{name} must have dimension 2 or 4, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)):
        raise ValidationError(f"{name} has non-finite entries")
    if normalized and abs(np.vdot(vec, vec).real - 1.0) > tol:
        raise ValidationError(f"{name} is not normalized")
    return vec


def matmul(a, b) -> np.ndarray:
    a, b = as_cmat(a, "a"), as_cmat(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValidationError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    """4x4 Kronecker product of two 2x2 matrices; block (i, j) is ``a[i, j] * b``."""
    a, b = as_cmat(a, "a"), as_cmat(b, "b")
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValidationError(f"kron supports 2x2 factors only, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def dagger(a) -> np.ndarray:
    return as_cmat(a).conj().T


def is_hermitian(a, tol: float = 1e-10) -> bool:
    a = as_cmat(a)
    return a.shape[0] == a.shape[1] and float(np.max(np.abs(a - a.conj().T))) <= tol


def is_unitary(a, tol: float = 1e-10) -> bool:
    a = as_cmat(a)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"is_unitary expects a square matrix, got {a.shape}")
    return float(np.max(np.abs(a.conj().T @ a - np.eye(a.shape[0])))) <= tol


def is_normal(a, tol: float = 1e-10) -> bool:
    a = as_cmat(a)
    return float(np.max(np.abs(a @ a.conj().T - a.conj().T @ a))) <= tol


@dataclass(frozen=True)
class HermEig:
    """Eigendecomposition of a Hermitian matrix.

    ``eigenvalues`` are ascending; ``eigenvectors[:, k]`` belongs to
    ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    # largest-modulus component made real non-negative; ties go to the first index
    k = int(np.argmax(np.abs(vec) - 1e-12 * np.arange(vec.shape[0])))
    amp = vec[k]
    if abs(amp) == 0:
        return vec
    return vec * (abs(amp) / amp)


def hermitian_eig(a, tol: float = 1e-10) -> HermEig:
    """Full spectrum of a Hermitian 2x2 or 4x4 matrix with deterministic phases.

    Eigenvectors inside a degenerate cluster (gap below 1e-9) are
    re-orthonormalized by sequential projection before the phase convention is
    applied, so the output basis is orthonormal to machine precision.
    """
    a = as_cmat(a)
    if a.shape[0] != a.shape[1]:
        raise ValidationError(f"hermitian_eig expects a square matrix, got {a.shape}")
    if not is_hermitian(a, tol):
        raise ValidationError("hermitian_eig expects a Hermitian matrix")
    a = (a + a.conj().T) / 2
    values, vectors = np.linalg.eigh(a)
    vectors = vectors.astype(complex)
    start = 0
    n = values.shape[0]
    while start < n:
        stop = start + 1
        while stop < n and values[stop] - values[stop - 1] < 1e-9:
            stop += 1
        if stop - start > 1:
            for k in range(start, stop):
                v = vectors[:, k]
                for m in range(start, k):
                    v = v - np.vdot(vectors[:, m], v) * vectors[:, m]
                vectors[:, k] = v / np.linalg.norm(v)
        start = stop
    for k in range(n):
        vectors[:, k] = _fix_phase(vectors[:, k])
    return HermEig(eigenvalues=values.astype(float), eigenvectors=vectors)


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(hermitian_eig(a).eigenvalues)))


def projector(vec) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(vec, vec.conj())
