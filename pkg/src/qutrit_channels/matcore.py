"""Small dense complex-matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Everything here
is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-12
PSD_TOL = 1e-10


class DimensionError(ValueError):
    """Raised when a matrix has the wrong shape for an operation."""


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


def as_matrix(m, dim: int | None = None) -> np.ndarray:
    """Return ``m`` as a square complex array, optionally checking its size."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if dim is not None and a.shape[0] != dim:
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {a.shape[0]}x{a.shape[1]}")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - dagger(m))))


def unitarity_error(u: np.ndarray) -> float:
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))))


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_error(as_matrix(m)) <= tol


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(as_matrix(u)) <= tol


@dataclass(frozen=True)
class MinorTable:
    """2x2 minors of a 3x3 matrix, indexed the way the qubit formulas use them.

    ``entries[j-1, k-1]`` holds ``M_jk``: the determinant left after deleting
    row ``4-j`` and column ``4-k`` of the source matrix.  With that
    convention, ``U^{-1}[a, c] = (-1)**(a+c) * M[4-c, 4-a] / det``.
    """

    entries: np.ndarray
    det: complex

    def __call__(self, j: int, k: int) -> complex:
        return self.entries[j - 1, k - 1]

    def adjugate(self) -> np.ndarray:
        adj = np.empty((3, 3), dtype=complex)
        for a in range(1, 4):
            for c in range(1, 4):
                adj[a - 1, c - 1] = (-1) ** (a + c) * self(4 - c, 4 - a)
        return adj


def _det2(a: np.ndarray) -> complex:
    return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def det3(m: np.ndarray) -> complex:
    """Determinant of a 3x3 matrix by expansion along the first row."""
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def minors(m) -> MinorTable:
    """Compute the minor table and determinant of a 3x3 matrix."""
    a = as_matrix(m, 3)
    entries = np.empty((3, 3), dtype=complex)
    for j in range(1, 4):
        rows = [r for r in range(3) if r != 3 - j]
        for k in range(1, 4):
            cols = [c for c in range(3) if c != 3 - k]
            entries[j - 1, k - 1] = _det2(a[np.ix_(rows, cols)])
    return MinorTable(entries=entries, det=complex(det3(a)))


def eigenvalues_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, in ascending order.

    2x2 matrices use the closed form; larger ones go through LAPACK.
    """
    a = as_matrix(m)
    if hermiticity_error(a) > tol:
        raise NotHermitianError(f"matrix is not Hermitian (deviation {hermiticity_error(a):.3e})")
    if a.shape[0] == 1:
        return np.array([a[0, 0].real])
    if a.shape[0] == 2:
        mean = 0.5 * (a[0, 0].real + a[1, 1].real)
        half_gap = np.hypot(0.5 * (a[0, 0].real - a[1, 1].real), abs(a[0, 1]))
        return np.array([mean - half_gap, mean + half_gap])
    return np.linalg.eigvalsh(0.5 * (a + dagger(a)))


def conjugate(rho, u, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``U^dagger rho U``."""
    r = as_matrix(rho)
    v = as_matrix(u, r.shape[0])
    err = unitarity_error(v)
    if err > tol:
        raise NotUnitaryError(f"matrix is not unitary (deviation {err:.3e})")
    return dagger(v) @ r @ v


def vn_entropy(rho) -> float:
    """Von Neumann entropy in nats; eigenvalues below 1e-15 contribute zero."""
    lam = eigenvalues_hermitian(rho, tol=1e-9)
    lam = lam[lam > 1e-15]
    return float(-np.sum(lam * np.log(lam))) + 0.0
