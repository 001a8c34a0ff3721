"""Probability representation of qubit states and coin entropies.

A qubit is encoded by the probabilities ``p1, p2, p3`` of spin projection
+1/2 along x, y, z::

    rho = [[p3,                     p1 - 1/2 - i(p2 - 1/2)],
           [p1 - 1/2 + i(p2 - 1/2), 1 - p3               ]]

The matrix is positive iff ``sum_j (p_j - 1/2)**2 <= 1/4``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .states import validate_density

BLOCH_TOL = 1e-10
_CLAMP = 1e-15


class BlochConstraintError(ValueError):
    pass


class ProbabilityTriple(NamedTuple):
    p1: float
    p2: float
    p3: float

    def bloch_excess(self) -> float:
        """``sum (p_j - 1/2)^2 - 1/4``; non-positive for valid triples."""
        return sum((p - 0.5) ** 2 for p in self) - 0.25


def _check(t: ProbabilityTriple) -> ProbabilityTriple:
    if any(p < -BLOCH_TOL or p > 1 + BLOCH_TOL for p in t):
        raise BlochConstraintError(f"probabilities must lie in [0, 1]: {tuple(t)}")
    if t.bloch_excess() > BLOCH_TOL:
        raise BlochConstraintError(f"triple {tuple(t)} lies outside the Bloch ball by {t.bloch_excess():.3e}")
    return t


def to_probabilities(q) -> ProbabilityTriple:
    q = validate_density(q, 2)
    c = q[0, 1]
    return _check(ProbabilityTriple(0.5 + c.real, 0.5 - c.imag, q[0, 0].real))


def from_probabilities(t) -> np.ndarray:
    t = _check(ProbabilityTriple(*map(float, t)))
    c = (t.p1 - 0.5) - 1j * (t.p2 - 0.5)
    return np.array([[t.p3, c], [np.conj(c), 1 - t.p3]], dtype=complex)


def probability_evolution(t, u11: complex) -> ProbabilityTriple:
    """Triple after ``p3 -> p3 |u11|^2`` and coherence ``-> coherence * conj(u11)``."""
    if abs(u11) > 1 + 1e-12:
        raise ValueError(f"|u11| must not exceed 1, got {abs(u11):.6g}")
    t = _check(ProbabilityTriple(*map(float, t)))
    c = ((t.p1 - 0.5) - 1j * (t.p2 - 0.5)) * np.conj(u11)
    out = ProbabilityTriple(0.5 + c.real, 0.5 - c.imag, t.p3 * abs(u11) ** 2)
    try:
        return _check(out)
    except BlochConstraintError as exc:
        raise RuntimeError(f"probability evolution left the Bloch ball: {exc}") from exc


def _xlogx(p: float) -> float:
    return 0.0 if p < _CLAMP else p * np.log(p)


def coin_shannon(p: float) -> float:
    """Binary Shannon entropy of ``(p, 1 - p)`` in nats."""
    if not -1e-12 <= p <= 1 + 1e-12:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return -(_xlogx(p) + _xlogx(1 - p)) + 0.0


def evolved_entropy(p3: float, u11: complex) -> float:
    """Shannon entropy of the coin ``(p3 |u11|^2, 1 - p3 |u11|^2)``."""
    return coin_shannon(p3 * abs(u11) ** 2)


def coin_tsallis(p: float, q: float = 2.0) -> float:
    """Binary Tsallis entropy ``(1 - p^q - (1-p)^q) / (q - 1)``."""
    if q == 1:
        raise ValueError("Tsallis index q=1 is the Shannon limit; use coin_shannon")
    if not -1e-12 <= p <= 1 + 1e-12:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    p = min(max(p, 0.0), 1.0)
    return (1 - p**q - (1 - p) ** q) / (q - 1)
