"""Driven, dissipative three-level dynamics.

The density matrix obeys ``d rho/dt = i[rho, H] + R(rho)``.  For the Lambda
configuration the shared level 3 couples to levels 1 and 2, decays into them
at rates ``g31`` and ``g32``, and the relaxation term is::

    [[ g31 r33,  -g' r12,  -g1 r13],
     [ -g' r21,  g32 r33,  -g2 r23],
     [ -g1 r31,  -g2 r32,  -g  r33]]      g = g31 + g32,  g' = g1 + g2

V and Xi use the same structure with the roles of the levels permuted, so
that the empty level of the fixed point is 2 (V, giving S5) or 1 (Xi,
giving S6) instead of 3 (Lambda, giving S4).

Integration is classic fixed-step RK4 in the frame given by the config.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .extraction import SLOTS, qubit_formula
from .matcore import dagger, vn_entropy
from .states import SigmaFamily, validate

logger = logging.getLogger(__name__)

# role -> level (0-based): roles are (first coupled, second coupled, shared).
ROLE_LEVELS = {
    "lambda": (0, 1, 2),
    "v": (0, 2, 1),
    "xi": (1, 2, 0),
}
TARGET_FAMILY = {"lambda": SigmaFamily.S4, "v": SigmaFamily.S5, "xi": SigmaFamily.S6}

MAX_STEP_PRODUCT = 0.05
POSITIVITY_WARN = -1e-6


class StepSizeError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float, state: np.ndarray):
        super().__init__(message)
        self.residual = residual
        self.state = state


def _kind(kind: str) -> str:
    k = kind.lower()
    if k not in ROLE_LEVELS:
        raise ValueError(f"unknown configuration {kind!r}; expected lambda, v or xi")
    return k


@dataclass(frozen=True)
class LevelConfig:
    """Three-level coupling configuration.

    ``omega1``/``omega2`` are the energies of the two coupled levels
    (detunings in the rotating frame); ``rabi1``/``rabi2`` the couplings to
    the shared level, defaulting to ``omega1``/``omega2``.  In the
    ``"rotating"`` frame the drive is resonant and the diagonal vanishes; the
    ``"static"`` frame keeps the energies on the diagonal.
    """

    kind: str = "lambda"
    omega1: float = 1.0
    omega2: float = 1.0
    rabi1: float | None = None
    rabi2: float | None = None
    frame: str = "rotating"

    def __post_init__(self):
        object.__setattr__(self, "kind", _kind(self.kind))
        if self.frame not in ("rotating", "static"):
            raise ValueError(f"frame must be 'rotating' or 'static', got {self.frame!r}")
        for name in ("rabi1", "rabi2"):
            val = getattr(self, name)
            if val is not None and val < 0:
                raise ValueError(f"{name} must be non-negative (absorb phases into the basis)")

    @property
    def couplings(self) -> tuple[float, float]:
        r1 = self.omega1 if self.rabi1 is None else self.rabi1
        r2 = self.omega2 if self.rabi2 is None else self.rabi2
        return float(r1), float(r2)


@dataclass(frozen=True)
class RelaxationRates:
    g31: float = 0.0
    g32: float = 0.0
    g1: float = 0.0
    g2: float = 0.0

    def __post_init__(self):
        for name in ("g31", "g32", "g1", "g2"):
            if getattr(self, name) < 0:
                raise ValueError(f"rate {name} must be non-negative")

    @property
    def gamma(self) -> float:
        return self.g31 + self.g32

    @property
    def gamma_prime(self) -> float:
        return self.g1 + self.g2


def _to_roles(m: np.ndarray, kind: str) -> np.ndarray:
    p = ROLE_LEVELS[kind]
    return m[np.ix_(p, p)]


def _from_roles(m: np.ndarray, kind: str) -> np.ndarray:
    p = ROLE_LEVELS[kind]
    out = np.empty_like(m)
    out[np.ix_(p, p)] = m
    return out


def build_hamiltonian(cfg: LevelConfig) -> np.ndarray:
    o1, o2 = cfg.couplings
    d1, d2 = (cfg.omega1, cfg.omega2) if cfg.frame == "static" else (0.0, 0.0)
    h = np.array([[d1, 0, o1], [0, d2, o2], [o1, o2, 0]], dtype=complex)
    return _from_roles(h, cfg.kind)


def relaxation_term(rho, rates: RelaxationRates, kind: str = "lambda") -> np.ndarray:
    kind = _kind(kind)
    r = _to_roles(np.asarray(rho, dtype=complex), kind)
    g, gp = rates.gamma, rates.gamma_prime
    out = np.array(
        [
            [rates.g31 * r[2, 2], -gp * r[0, 1], -rates.g1 * r[0, 2]],
            [-gp * r[1, 0], rates.g32 * r[2, 2], -rates.g2 * r[1, 2]],
            [-rates.g1 * r[2, 0], -rates.g2 * r[2, 1], -g * r[2, 2]],
        ],
        dtype=complex,
    )
    return _from_roles(out, kind)


def generator(rho: np.ndarray, h: np.ndarray, rates: RelaxationRates, kind: str) -> np.ndarray:
    """Right-hand side ``i[rho, H] + R(rho)``."""
    return 1j * (rho @ h - h @ rho) + relaxation_term(rho, rates, kind)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    min_eigenvalue: float = field(default=0.0)

    def slot_entropies(self) -> np.ndarray:
        """Von Neumann entropies of the six qubits, shape ``(len(times), 6)``."""
        return np.array([[vn_entropy(qubit_formula(s, k)) for k in SLOTS] for s in self.states])

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _check_step(dt: float, h: np.ndarray, rates: RelaxationRates) -> None:
    if dt <= 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    scale = max(np.max(np.abs(np.linalg.eigvalsh(h))), rates.gamma, rates.gamma_prime,
                rates.g1, rates.g2)
    if dt * scale > MAX_STEP_PRODUCT:
        raise StepSizeError(
            f"dt * max(|H|, rates) = {dt * scale:.3g} exceeds {MAX_STEP_PRODUCT}; reduce dt"
        )


def _rk4_step(rho, dt, h, rates, kind):
    k1 = generator(rho, h, rates, kind)
    k2 = generator(rho + 0.5 * dt * k1, h, rates, kind)
    k3 = generator(rho + 0.5 * dt * k2, h, rates, kind)
    k4 = generator(rho + dt * k3, h, rates, kind)
    nxt = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return 0.5 * (nxt + dagger(nxt))


def _steps(dt: float, t_end: float) -> int:
    n = int(round(t_end / dt))
    if n < 0 or abs(n * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise StepSizeError(f"t_end={t_end} is not a non-negative multiple of dt={dt}")
    return n


def evolve(rho0, cfg: LevelConfig, rates: RelaxationRates, dt: float, t_end: float,
           store_every: int = 1) -> Trajectory:
    """Integrate the master equation from ``rho0`` to ``t_end``.

    A ``RuntimeWarning`` is issued if the state develops an eigenvalue below
    -1e-6; the relaxation term is not completely positive for every choice
    of rates, so positivity is monitored rather than imposed.
    """
    rho = validate(rho0)
    h = build_hamiltonian(cfg)
    _check_step(dt, h, rates)
    n = _steps(dt, t_end)
    times, states = [0.0], [rho.copy()]
    min_eig = float(np.linalg.eigvalsh(rho)[0])
    for i in range(1, n + 1):
        rho = _rk4_step(rho, dt, h, rates, cfg.kind)
        if i % store_every == 0 or i == n:
            times.append(i * dt)
            states.append(rho.copy())
            min_eig = min(min_eig, float(np.linalg.eigvalsh(rho)[0]))
    if min_eig < POSITIVITY_WARN:
        warnings.warn(f"density matrix lost positivity: min eigenvalue {min_eig:.3e}", RuntimeWarning,
                      stacklevel=2)
    return Trajectory(times=np.array(times), states=np.array(states), min_eigenvalue=min_eig)


def dark_state(cfg: LevelConfig) -> np.ndarray:
    """State vector decoupled from the drive: ``(rabi2, -rabi1, 0) / norm`` in role order."""
    o1, o2 = cfg.couplings
    norm = np.hypot(o1, o2)
    if norm == 0:
        raise ValueError("dark state undefined when both couplings vanish")
    v = np.zeros(3, dtype=complex)
    p = ROLE_LEVELS[cfg.kind]
    v[p[0]], v[p[1]] = o2 / norm, -o1 / norm
    return v


def dark_density(cfg: LevelConfig) -> np.ndarray:
    v = dark_state(cfg)
    return np.outer(v, np.conj(v))


# Defaults for preparation: only the first leg is driven, so population is
# optically pumped into the second coupled level, which is stationary.
DEFAULT_PREP_RATES = RelaxationRates(g31=1.0, g32=1.0, g1=0.5, g2=0.5)


def default_prep_config(kind: str) -> LevelConfig:
    return LevelConfig(kind=kind, omega1=1.0, omega2=0.0, frame="rotating")


@dataclass
class Preparation:
    state: np.ndarray
    residual: float
    time: float
    family: SigmaFamily


def prepare_sigma(kind: str, rho0=None, cfg: LevelConfig | None = None,
                  rates: RelaxationRates | None = None, dt: float = 0.01, t_end: float = 200.0,
                  tol: float = 1e-6) -> Preparation:
    """Drive a configuration until its state falls into the target sigma family.

    Lambda reaches S4, V reaches S5 and Xi reaches S6.  Integration stops as
    soon as the largest forced-zero entry drops below ``tol``; the returned
    state has those entries set to zero exactly.
    """
    kind = _kind(kind)
    cfg = cfg or default_prep_config(kind)
    if cfg.kind != kind:
        raise ValueError(f"config is for {cfg.kind!r}, requested {kind!r}")
    rates = rates or DEFAULT_PREP_RATES
    if rates.gamma <= 0:
        raise ValueError("preparation needs a positive spontaneous-emission rate")
    family = TARGET_FAMILY[kind]
    rho = validate(np.eye(3) / 3 if rho0 is None else rho0)
    h = build_hamiltonian(cfg)
    _check_step(dt, h, rates)
    n = _steps(dt, t_end)
    residual = family.residual(rho)
    i = 0
    while residual >= tol and i < n:
        rho = _rk4_step(rho, dt, h, rates, kind)
        i += 1
        residual = family.residual(rho)
    if residual >= tol:
        raise ConvergenceError(
            f"{kind} dynamics did not reach {family.value} by t={t_end}: residual {residual:.3e}",
            residual, rho,
        )
    clamped = rho.copy()
    clamped[family.forced_zero_mask()] = 0.0
    clamped /= np.trace(clamped).real
    logger.debug("prepared %s after t=%.3f, residual %.3e", family.value, i * dt, residual)
    return Preparation(state=validate(clamped), residual=residual, time=i * dt, family=family)
