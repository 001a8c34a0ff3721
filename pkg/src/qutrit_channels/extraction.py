"""The six qubit states carried by a single qutrit.

Each slot lumps two qutrit levels into one qubit level::

    1: [[1-r33, r13], [r31, r33]]      4: [[r22, r23], [r32, 1-r22]]
    2: [[1-r22, r12], [r21, r22]]      5: [[r11, r12], [r21, 1-r11]]
    3: [[r11, r13], [r31, 1-r11]]      6: [[1-r33, r23], [r32, r33]]

The same matrices arise as single-qubit reductions of the 4x4 embeddings;
``SLOT_EMBEDDINGS`` records which embedding and which traced factor gives
each slot, and ``partial_trace_oracle`` computes that reduction directly.
"""

from __future__ import annotations

import numpy as np

from .matcore import PSD_TOL, as_matrix, eigenvalues_hermitian, vn_entropy
from .states import InvalidStateError, TwoQubitEmbedding, embed, validate, validate_density

SLOTS = (1, 2, 3, 4, 5, 6)

# slot -> (zero_index for embed, tensor factor traced out)
SLOT_EMBEDDINGS: dict[int, tuple[int, str]] = {
    1: (4, "second"),
    2: (4, "first"),
    3: (1, "second"),
    4: (1, "first"),
    5: (2, "second"),
    6: (2, "first"),
}


def _check_slot(k: int) -> int:
    if k not in SLOTS:
        raise ValueError(f"qubit slot must be in 1..6, got {k!r}")
    return int(k)


def qubit_formula(r: np.ndarray, k: int) -> np.ndarray:
    """Slot-``k`` qubit of a 3x3 matrix without any validation."""
    if k == 1:
        return np.array([[1 - r[2, 2], r[0, 2]], [r[2, 0], r[2, 2]]])
    if k == 2:
        return np.array([[1 - r[1, 1], r[0, 1]], [r[1, 0], r[1, 1]]])
    if k == 3:
        return np.array([[r[0, 0], r[0, 2]], [r[2, 0], 1 - r[0, 0]]])
    if k == 4:
        return np.array([[r[1, 1], r[1, 2]], [r[2, 1], 1 - r[1, 1]]])
    if k == 5:
        return np.array([[r[0, 0], r[0, 1]], [r[1, 0], 1 - r[0, 0]]])
    if k == 6:
        return np.array([[1 - r[2, 2], r[1, 2]], [r[2, 1], r[2, 2]]])
    raise ValueError(f"qubit slot must be in 1..6, got {k!r}")


def _checked_qubit(q: np.ndarray, k: int, rho: np.ndarray) -> np.ndarray:
    lam = eigenvalues_hermitian(q)
    if lam[0] < -PSD_TOL:
        raise InvalidStateError(
            f"slot {k} qubit has eigenvalue {lam[0]:.3e}; qutrit diagonal was {np.diag(rho).real}"
        )
    return q


def extract(rho, k: int) -> np.ndarray:
    """Qubit density matrix in slot ``k`` of a qutrit state."""
    r = validate(rho)
    k = _check_slot(k)
    return _checked_qubit(qubit_formula(r, k), k, r)


def extract_all(rho) -> np.ndarray:
    """All six qubits as an array of shape ``(6, 2, 2)``; slot ``k`` is index ``k-1``."""
    r = validate(rho)
    return np.stack([_checked_qubit(qubit_formula(r, k), k, r) for k in SLOTS])


def partial_trace_oracle(e: TwoQubitEmbedding | np.ndarray, factor: str) -> np.ndarray:
    """Reduce a 4x4 two-qubit matrix by tracing out ``factor`` ("first" or "second")."""
    rho4 = e.rho4 if isinstance(e, TwoQubitEmbedding) else as_matrix(e, 4)
    t = rho4.reshape(2, 2, 2, 2)
    if factor == "second":
        return np.einsum("ajbj->ab", t)
    if factor == "first":
        return np.einsum("jajb->ab", t)
    raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")


def extract_via_embedding(rho, k: int) -> np.ndarray:
    """Slot-``k`` qubit obtained by embedding and partial tracing."""
    zero_index, factor = SLOT_EMBEDDINGS[_check_slot(k)]
    return partial_trace_oracle(embed(rho, zero_index), factor)


def slot_entropy(q) -> float:
    """Von Neumann entropy (nats) of a qubit state."""
    return vn_entropy(validate_density(q, 2))
