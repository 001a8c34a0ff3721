"""Qubit maps induced by qutrit unitaries, and the textbook damping channels.

``transform_closed_form`` evaluates the six transformed qubits of
``U^dagger rho U`` from ``N = rho U``, the minor table of ``U`` and its
determinant, without forming the conjugated qutrit.  It is checked against
``conjugate`` followed by ``extract_all``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .extraction import partial_trace_oracle
from .matcore import as_matrix, minors, vn_entropy
from .states import validate, validate_density

DET_TOL = 1e-12


class SingularUnitaryError(ValueError):
    pass


def transform_closed_form(rho, u) -> np.ndarray:
    """Transformed qubits ``rho'_1..rho'_6`` as an array of shape ``(6, 2, 2)``."""
    r = validate(rho)
    v = as_matrix(u, 3)
    mt = minors(v)
    D = mt.det
    if abs(D) < DET_TOL:
        raise SingularUnitaryError(f"|det U| = {abs(D):.3e}")
    n = r @ v
    M = mt
    N = lambda j, k: n[j - 1, k - 1]  # noqa: E731

    # Each combination is D times one entry of U^dagger rho U.
    r33 = M(3, 1) * N(1, 3) - M(2, 1) * N(2, 3) + M(1, 1) * N(3, 3)
    r22 = -M(3, 2) * N(1, 2) + M(2, 2) * N(2, 2) - M(1, 2) * N(3, 2)
    r11 = M(3, 3) * N(1, 1) - M(2, 3) * N(2, 1) + M(1, 3) * N(3, 1)
    r13 = M(3, 3) * N(1, 3) - M(2, 3) * N(2, 3) + M(1, 3) * N(3, 3)
    r31 = M(3, 1) * N(1, 1) - M(2, 1) * N(2, 1) + M(1, 1) * N(3, 1)
    r12 = M(3, 3) * N(1, 2) - M(2, 3) * N(2, 2) + M(1, 3) * N(3, 2)
    r21 = -M(3, 2) * N(1, 1) + M(2, 2) * N(2, 1) - M(1, 2) * N(3, 1)
    r23 = -M(3, 2) * N(1, 3) + M(2, 2) * N(2, 3) - M(1, 2) * N(3, 3)
    r32 = M(3, 1) * N(1, 2) - M(2, 1) * N(2, 2) + M(1, 1) * N(3, 2)

    out = np.array(
        [
            [[D - r33, r13], [r31, r33]],
            [[D - r22, r12], [r21, r22]],
            [[r11, r13], [r31, D - r11]],
            [[r22, r23], [r32, D - r22]],
            [[r11, r12], [r21, D - r11]],
            [[D - r33, r23], [r32, r33]],
        ],
        dtype=complex,
    )
    return out / D


@dataclass(frozen=True)
class PhaseDamping:
    p: float

    def __post_init__(self):
        _check_probability(self.p)


@dataclass(frozen=True)
class AmplitudeDamping:
    p: float

    def __post_init__(self):
        _check_probability(self.p)


ChannelKind = PhaseDamping | AmplitudeDamping


def _check_probability(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"channel probability must lie in [0, 1], got {p!r}")


def channel_from_name(kind: str, p: float) -> ChannelKind:
    kind = kind.lower()
    if kind in ("phase", "phase_damping", "phasedamping"):
        return PhaseDamping(p)
    if kind in ("amp", "amplitude", "amplitude_damping", "amplitudedamping"):
        return AmplitudeDamping(p)
    raise ValueError(f"unknown channel kind {kind!r}")


def _apply(q: np.ndarray, c: ChannelKind) -> np.ndarray:
    out = q.copy()
    if isinstance(c, PhaseDamping):
        out[0, 1] *= 1 - c.p
        out[1, 0] *= 1 - c.p
    elif isinstance(c, AmplitudeDamping):
        s = np.sqrt(1 - c.p)
        out[1, 1] = (1 - c.p) * q[1, 1]
        out[0, 0] = 1 - out[1, 1]
        out[0, 1] *= s
        out[1, 0] *= s
    else:
        raise TypeError(f"unsupported channel {c!r}")
    return out


def apply_named_channel(q, c: ChannelKind) -> np.ndarray:
    """Apply phase damping or amplitude damping to a qubit.

    Level 0 (upper-left) is the ground state.
    """
    return _apply(validate_density(q, 2), c)


def iterate_channel(q, c: ChannelKind, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Apply ``c`` ``n`` times. Returns the final state and the ``(n+1, 2, 2)`` trajectory."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    cur = validate_density(q, 2)
    traj = [cur]
    for _ in range(n):
        cur = _apply(cur, c)
        traj.append(cur)
    return cur, np.stack(traj)


def _complete_unitary(isometry: np.ndarray, input_cols: list[int]) -> np.ndarray:
    """Unitary whose columns ``input_cols`` are the given orthonormal vectors."""
    dim = isometry.shape[0]
    q, _ = np.linalg.qr(np.hstack([isometry, np.eye(dim)]))
    complement = q[:, isometry.shape[1] : dim]
    rest = [c for c in range(dim) if c not in input_cols]
    u = np.empty((dim, dim), dtype=complex)
    u[:, input_cols] = isometry
    u[:, rest] = complement
    return u


def dilation_unitary(c: ChannelKind) -> tuple[np.ndarray, int]:
    """System-environment unitary for ``c`` and the environment dimension.

    The system is the first tensor factor and the environment starts in
    ``|0>``.  Phase damping uses a three-level environment::

        |0>|0> -> sqrt(1-p)|0>|0> + sqrt(p)|0>|1>
        |1>|0> -> sqrt(1-p)|1>|0> + sqrt(p)|1>|2>

    amplitude damping a two-level one::

        |0>|0> -> |0>|0>
        |1>|0> -> sqrt(1-p)|1>|0> + sqrt(p)|0>|1>
    """
    a, b = np.sqrt(1 - c.p), np.sqrt(c.p)
    if isinstance(c, PhaseDamping):
        d_env = 3
        cols = np.zeros((6, 2), dtype=complex)
        cols[0 * 3 + 0, 0], cols[0 * 3 + 1, 0] = a, b
        cols[1 * 3 + 0, 1], cols[1 * 3 + 2, 1] = a, b
    elif isinstance(c, AmplitudeDamping):
        d_env = 2
        cols = np.zeros((4, 2), dtype=complex)
        cols[0 * 2 + 0, 0] = 1.0
        cols[1 * 2 + 0, 1], cols[0 * 2 + 1, 1] = a, b
    else:
        raise TypeError(f"unsupported channel {c!r}")
    return _complete_unitary(cols, [0, d_env]), d_env


def dilation_oracle(q, c: ChannelKind) -> np.ndarray:
    """Channel output computed as ``tr_env[T (q x |0><0|) T^dagger]``."""
    q = validate_density(q, 2)
    t, d_env = dilation_unitary(c)
    env0 = np.zeros((d_env, d_env), dtype=complex)
    env0[0, 0] = 1.0
    joint = t @ np.kron(q, env0) @ np.conj(t).T
    if d_env == 2:
        return partial_trace_oracle(joint, "second")
    return np.einsum("ajbj->ab", joint.reshape(2, d_env, 2, d_env))


def purity(q) -> float:
    q = np.asarray(q)
    return float(np.real(np.trace(q @ q)))


def qubit_entropy(q) -> float:
    return vn_entropy(q)
