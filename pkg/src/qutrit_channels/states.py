"""Qutrit density matrices: validation, the sigma families, sampling, and the
two-qubit embedding with its partial-transpose separability check."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .matcore import (
    HERMITIAN_TOL,
    PSD_TOL,
    DimensionError,
    as_matrix,
    dagger,
    eigenvalues_hermitian,
    hermiticity_error,
)

TRACE_TOL = 1e-12
SUPPORTED_DIMS = (2, 3, 4, 6)


class InvalidStateError(ValueError):
    """A matrix that does not describe a density operator."""


class SigmaFamily(enum.Enum):
    """Qutrit state families with structurally zero entries.

    S1-S3 have one vanishing coherence; S4-S6 have one empty level.
    """

    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"

    @property
    def zero_coherence(self) -> tuple[int, int] | None:
        """0-based (row, col) of the vanishing coherence for S1-S3."""
        return {"S1": (1, 2), "S2": (0, 1), "S3": (0, 2)}.get(self.value)

    @property
    def empty_level(self) -> int | None:
        """0-based index of the unpopulated level for S4-S6."""
        return {"S4": 2, "S5": 1, "S6": 0}.get(self.value)

    def forced_zero_mask(self) -> np.ndarray:
        mask = np.zeros((3, 3), dtype=bool)
        if self.zero_coherence is not None:
            i, j = self.zero_coherence
            mask[i, j] = mask[j, i] = True
        else:
            mask[self.empty_level, :] = True
            mask[:, self.empty_level] = True
        return mask

    def residual(self, rho) -> float:
        """Largest magnitude among the entries this family forces to zero."""
        return float(np.max(np.abs(np.asarray(rho)[self.forced_zero_mask()])))


def _coerce_family(kind) -> SigmaFamily:
    if isinstance(kind, SigmaFamily):
        return kind
    return SigmaFamily(str(kind).upper())


def validate_density(rho, dim: int | None = None, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity, returning a copy of ``rho``."""
    try:
        a = as_matrix(rho, dim)
    except DimensionError as exc:
        raise InvalidStateError(str(exc)) from exc
    herr = hermiticity_error(a)
    if herr > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian: max |rho - rho^dagger| = {herr:.3e}")
    tr = np.trace(a)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace is {tr.real:.15g}, expected 1")
    lam = eigenvalues_hermitian(a)
    if lam[0] < -psd_tol:
        raise InvalidStateError(f"negative eigenvalue {lam[0]:.3e}")
    return a.copy()


def validate(rho) -> np.ndarray:
    """Validate a qutrit density matrix."""
    return validate_density(rho, 3)


def make_sigma(kind, entries) -> np.ndarray:
    """Build a member of a sigma family.

    ``entries`` is either a full 3x3 matrix whose forced-zero entries are
    already zero, or, for S4-S6, the 2x2 block on the two populated levels.
    """
    family = _coerce_family(kind)
    a = np.asarray(entries, dtype=complex)
    if a.shape == (2, 2) and family.empty_level is not None:
        keep = [i for i in range(3) if i != family.empty_level]
        full = np.zeros((3, 3), dtype=complex)
        full[np.ix_(keep, keep)] = a
        a = full
    elif a.shape != (3, 3):
        raise DimensionError(f"{family.value} needs a 3x3 matrix, got shape {a.shape}")
    bad = np.abs(a[family.forced_zero_mask()])
    if bad.size and bad.max() > 0:
        raise InvalidStateError(
            f"{family.value} requires zeros at its forced entries (max |entry| {bad.max():.3e})"
        )
    return validate(a)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _ginibre(dim: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))


def random_state(dim: int, seed=None) -> np.ndarray:
    """Hilbert-Schmidt random density matrix ``G G^dagger / tr(G G^dagger)``.

    ``seed`` may be an int or a caller-owned ``numpy.random.Generator``.
    """
    if dim not in SUPPORTED_DIMS:
        raise DimensionError(f"dimension {dim} not in {SUPPORTED_DIMS}")
    g = _ginibre(dim, _rng(seed))
    rho = g @ dagger(g)
    rho = 0.5 * (rho + dagger(rho))
    return rho / np.trace(rho).real


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar random unitary via QR with the phases of ``R``'s diagonal divided out."""
    if dim not in SUPPORTED_DIMS:
        raise DimensionError(f"dimension {dim} not in {SUPPORTED_DIMS}")
    z = _ginibre(dim, _rng(seed)) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_sigma(kind, seed=None) -> np.ndarray:
    """Random member of a sigma family.

    S4-S6 drop the empty level of a Hilbert-Schmidt state (principal
    submatrices stay positive).  For S1-S3 the chosen coherence is zeroed and,
    if that breaks positivity, the identity is mixed in just enough to
    restore it; the identity has no off-diagonal part so the zero survives.
    """
    family = _coerce_family(kind)
    rho = random_state(3, seed)
    rho[family.forced_zero_mask()] = 0.0
    if family.zero_coherence is not None:
        lam = np.linalg.eigvalsh(rho)[0]
        if lam < 0:
            rho = rho + (-lam + 1e-12) * np.eye(3)
    return rho / np.trace(rho).real


# Two-qubit basis order is |00>, |01>, |10>, |11>; zero_index counts from 1.
@dataclass(frozen=True)
class TwoQubitEmbedding:
    rho4: np.ndarray
    zero_index: int


def embed(rho, zero_index: int = 4) -> TwoQubitEmbedding:
    """Place a qutrit state into a 4x4 matrix with one empty row and column.

    The three levels fill the remaining basis positions in order.
    """
    if zero_index not in (1, 2, 3, 4):
        raise ValueError(f"zero_index must be 1..4, got {zero_index}")
    r = validate(rho)
    keep = [i for i in range(4) if i != zero_index - 1]
    rho4 = np.zeros((4, 4), dtype=complex)
    rho4[np.ix_(keep, keep)] = r
    return TwoQubitEmbedding(rho4=rho4, zero_index=zero_index)


def partial_transpose(rho4: np.ndarray) -> np.ndarray:
    """Partial transpose over the second qubit of a 4x4 matrix."""
    t = np.asarray(rho4, dtype=complex).reshape(2, 2, 2, 2)
    return t.transpose(0, 3, 2, 1).reshape(4, 4)


@dataclass(frozen=True)
class PPTReport:
    separable: bool
    min_pt_eigenvalue: float
    spectra_equal: bool
    eigenvalues: np.ndarray
    pt_eigenvalues: np.ndarray

    def __bool__(self) -> bool:
        return self.separable


def is_ppt_separable(e: TwoQubitEmbedding, tol: float = PSD_TOL) -> PPTReport:
    """Peres-Horodecki test; for two qubits PPT is equivalent to separability."""
    lam = eigenvalues_hermitian(e.rho4)
    lam_pt = eigenvalues_hermitian(partial_transpose(e.rho4))
    return PPTReport(
        separable=bool(lam_pt[0] >= -tol),
        min_pt_eigenvalue=float(lam_pt[0]),
        spectra_equal=bool(np.max(np.abs(lam - lam_pt)) <= tol),
        eigenvalues=lam,
        pt_eigenvalues=lam_pt,
    )
