"""Named channel realizations on the qubits of a qutrit.

A reduced unitary ``U1``/``U2``/``U3`` acts as a 2x2 block on one pair of
qutrit levels and leaves the third level alone.  Applied to a state from the
matching sigma family, some of the six qubits undergo a phase-damping or
amplitude-damping map whose damping factor is an entry of the block; others
undergo a unitary rotation plus a correction weighted by the untouched
level's population ("quasi-unitary").

Every closed-form prediction here is checked against
:func:`~qutrit_channels.channels.transform_closed_form`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .channels import transform_closed_form
from .extraction import qubit_formula
from .matcore import as_matrix, dagger, is_unitary
from .states import SigmaFamily, random_sigma, random_unitary

# 0-based qutrit levels the 2x2 block acts on.
BLOCK_LEVELS = {"U1": (0, 1), "U2": (0, 2), "U3": (1, 2)}
# The level each reduced unitary leaves untouched.
SPECTATOR_LEVEL = {"U1": 2, "U2": 1, "U3": 0}

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)


class FamilyMismatchError(ValueError):
    """The state does not belong to the sigma family an entry requires."""


def reduced_unitary(kind: str, block) -> np.ndarray:
    """Embed a 2x2 unitary block as a 3x3 unitary with a unit spectator entry."""
    if kind not in BLOCK_LEVELS:
        raise ValueError(f"unknown reduced unitary {kind!r}")
    b = as_matrix(block, 2)
    u = np.eye(3, dtype=complex)
    u[np.ix_(BLOCK_LEVELS[kind], BLOCK_LEVELS[kind])] = b
    return u


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _require_family(rho: np.ndarray, family: SigmaFamily, tol: float = 1e-12) -> None:
    res = family.residual(rho)
    if res > tol:
        raise FamilyMismatchError(f"state is not in {family.value}: forced-zero residual {res:.3e}")


def _q(a, b, c, d) -> np.ndarray:
    return np.array([[a, b], [c, d]], dtype=complex)


Predictor = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ChannelRealization:
    """One (reduced unitary, sigma family, qubit slot) entry and its predicted map.

    ``scaling`` gives the complex factor multiplying the coherence; for
    amplitude-damping entries ``1 - |scaling|**2`` is the decay probability.
    """

    entry_id: str
    table: str
    unitary: str
    family: SigmaFamily
    slot: int
    channel: str
    predict: Predictor = field(repr=False)
    scaling: Callable[[np.ndarray], complex] = field(repr=False)
    nonstandard_form: bool = False
    note: str = ""


def _r(rho, i, j):
    return rho[i - 1, j - 1]


def _phdm(entry, unitary, family, slot, predict, scaling, **kw):
    return ChannelRealization(
        entry_id=entry, table="phdm", unitary=unitary, family=SigmaFamily(family), slot=slot,
        channel="phase_damping", predict=predict, scaling=scaling, **kw,
    )


def _spon(entry, unitary, family, slot, predict, scaling, **kw):
    return ChannelRealization(
        entry_id=entry, table="spon", unitary=unitary, family=SigmaFamily(family), slot=slot,
        channel="amplitude_damping", predict=predict, scaling=scaling, **kw,
    )


def _ad_top(pop, coh, scale):
    """Excited population in the lower-right, coherence ``coh`` damped by ``scale``."""
    return lambda r, u: _q(
        1 - pop(r) * abs(scale(u)) ** 2, coh(r) * scale(u),
        np.conj(coh(r) * scale(u)), pop(r) * abs(scale(u)) ** 2,
    )


def _ad_bottom(pop, coh, scale):
    return lambda r, u: _q(
        pop(r) * abs(scale(u)) ** 2, coh(r) * scale(u),
        np.conj(coh(r) * scale(u)), 1 - pop(r) * abs(scale(u)) ** 2,
    )


def _pd(diag, coh, scale, top: bool):
    """Phase-damped qubit: diagonal pattern from ``diag``, coherence ``coh * scale``."""
    def f(r, u):
        x = diag(r)
        c = coh(r) * scale(u)
        return _q(1 - x, c, np.conj(c), x) if top else _q(x, c, np.conj(c), 1 - x)
    return f


def _u(i, j, conj=False):
    if conj:
        return lambda u: np.conj(u[i - 1, j - 1])
    return lambda u: u[i - 1, j - 1]


def _rr(i, j):
    return lambda r: _r(r, i, j)


def _pop(i):
    return lambda r: _r(r, i, i).real


def _build_catalog() -> list[ChannelRealization]:
    cat = [
        # phase damping: one coherence of the qutrit vanishes
        _phdm("phdm:U1-S1:rho1", "U1", "S1", 1, _pd(_pop(3), _rr(1, 3), _u(1, 1, True), True), _u(1, 1, True)),
        _phdm("phdm:U1-S1:rho6", "U1", "S1", 6, _pd(_pop(3), _rr(1, 3), _u(1, 2, True), True), _u(1, 2, True),
              note="phase damping of slot 1 appearing in slot 6"),
        _phdm("phdm:U2-S1:rho2", "U2", "S1", 2, _pd(_pop(2), _rr(1, 2), _u(1, 1, True), True), _u(1, 1, True)),
        _phdm("phdm:U2-S1:rho4", "U2", "S1", 4, _pd(_pop(2), _rr(2, 1), _u(1, 2), False), _u(1, 2),
              nonstandard_form=True,
              note="printed as [[1-r33, u12* r12], [u12 r21, r33]]; the exact map is "
                   "[[r22, u12 r21], [u12* r12, 1-r22]]"),
        _phdm("phdm:U2-S2:rho2", "U2", "S2", 2, _pd(_pop(2), _rr(3, 2), _u(2, 1, True), True), _u(2, 1, True),
              nonstandard_form=True, note="coherence r32 sits where no slot carries it"),
        _phdm("phdm:U2-S2:rho4", "U2", "S2", 4, _pd(_pop(2), _rr(2, 3), _u(2, 2), False), _u(2, 2)),
        _phdm("phdm:U3-S2:rho3", "U3", "S2", 3, _pd(_pop(1), _rr(1, 3), _u(2, 2), False), _u(2, 2)),
        _phdm("phdm:U3-S2:rho5", "U3", "S2", 5, _pd(_pop(1), _rr(1, 3), _u(2, 1), False), _u(2, 1)),
        _phdm("phdm:U1-S3:rho1", "U1", "S3", 1, _pd(_pop(3), _rr(2, 3), _u(2, 1, True), True), _u(2, 1, True)),
        _phdm("phdm:U1-S3:rho6", "U1", "S3", 6, _pd(_pop(3), _rr(2, 3), _u(2, 2, True), True), _u(2, 2, True)),
        _phdm("phdm:U3-S3:rho3", "U3", "S3", 3, _pd(_pop(1), _rr(1, 2), _u(1, 2), False), _u(1, 2)),
        _phdm("phdm:U3-S3:rho5", "U3", "S3", 5, _pd(_pop(1), _rr(1, 2), _u(1, 1), False), _u(1, 1)),
        # amplitude damping: one level of the qutrit is empty
        _spon("spon:U2-S4:rho5", "U2", "S4", 5, _ad_bottom(_pop(1), _rr(1, 2), _u(1, 1, True)), _u(1, 1, True)),
        _spon("spon:U2-S4:rho6", "U2", "S4", 6, _ad_top(_pop(1), _rr(2, 1), _u(1, 2)), _u(1, 2)),
        _spon("spon:U3-S4:rho1", "U3", "S4", 1, _ad_top(_pop(2), _rr(1, 2), _u(1, 2)), _u(1, 2)),
        _spon("spon:U3-S4:rho2", "U3", "S4", 2, _ad_top(_pop(2), _rr(1, 2), _u(1, 1)), _u(1, 1)),
        _spon("spon:U1-S5:rho3", "U1", "S5", 3, _ad_bottom(_pop(1), _rr(1, 3), _u(1, 1, True)), _u(1, 1, True)),
        _spon("spon:U1-S5:rho4", "U1", "S5", 4, _ad_bottom(_pop(1), _rr(1, 3), _u(1, 2, True)), _u(1, 2, True)),
        _spon("spon:U3-S5:rho1", "U3", "S5", 1, _ad_top(_pop(3), _rr(1, 3), _u(2, 2)), _u(2, 2)),
        _spon("spon:U3-S5:rho2", "U3", "S5", 2, _ad_top(_pop(3), _rr(1, 3), _u(2, 1)), _u(2, 1)),
        _spon("spon:U1-S6:rho3", "U1", "S6", 3, _ad_bottom(_pop(2), _rr(2, 3), _u(2, 1, True)), _u(2, 1, True)),
        _spon("spon:U1-S6:rho4", "U1", "S6", 4, _ad_bottom(_pop(2), _rr(2, 3), _u(2, 2, True)), _u(2, 2, True)),
        _spon("spon:U2-S6:rho5", "U2", "S6", 5, _ad_bottom(_pop(3), _rr(3, 2), _u(2, 1, True)), _u(2, 1, True)),
        _spon("spon:U2-S6:rho6", "U2", "S6", 6, _ad_top(_pop(3), _rr(2, 3), _u(2, 2)), _u(2, 2)),
    ]
    cat.extend(_worked_u1_s1())
    return cat


def _worked_u1_s1() -> list[ChannelRealization]:
    """All six qubits of ``U1^dagger sigma1 U1`` written through ``sigma1 U1``."""

    def su(r, u, i, j):
        return (r @ reduced_unitary("U1", u))[i - 1, j - 1]

    def lower(r, u):
        return np.conj(u[0, 1]) * su(r, u, 1, 2) + np.conj(u[1, 1]) * su(r, u, 2, 2)

    def upper(r, u):
        return np.conj(u[0, 0]) * su(r, u, 1, 1) + np.conj(u[1, 0]) * su(r, u, 2, 1)

    def coh(r, u):
        return np.conj(u[0, 0]) * su(r, u, 1, 2) + np.conj(u[1, 0]) * su(r, u, 2, 2)

    def coh_t(r, u):
        return np.conj(u[0, 1]) * su(r, u, 1, 1) + np.conj(u[1, 1]) * su(r, u, 2, 1)

    r33 = _pop(3)
    preds = {
        1: lambda r, u: _q(1 - r33(r), _r(r, 1, 3) * np.conj(u[0, 0]), _r(r, 3, 1) * u[0, 0], r33(r)),
        2: lambda r, u: _q(1 - lower(r, u), coh(r, u), coh_t(r, u), lower(r, u)),
        3: lambda r, u: _q(upper(r, u), _r(r, 1, 3) * np.conj(u[0, 0]), _r(r, 3, 1) * u[0, 0], 1 - upper(r, u)),
        4: lambda r, u: _q(lower(r, u), _r(r, 1, 3) * np.conj(u[0, 1]), _r(r, 3, 1) * u[0, 1], 1 - lower(r, u)),
        5: lambda r, u: _q(upper(r, u), coh(r, u), coh_t(r, u), 1 - upper(r, u)),
        6: lambda r, u: _q(1 - r33(r), _r(r, 1, 3) * np.conj(u[0, 1]), _r(r, 3, 1) * u[0, 1], r33(r)),
    }
    notes = {5: "printed lower-left entry carries a stray factor; the exact entry is "
                "u12* (s U)_11 + u22* (s U)_21"}
    kinds = {1: "phase_damping", 6: "phase_damping", 2: "quasi_unitary", 5: "quasi_unitary",
             3: "mixed", 4: "mixed"}
    scal = {1: _u(1, 1, True), 3: _u(1, 1, True), 4: _u(1, 2, True), 6: _u(1, 2, True)}
    return [
        ChannelRealization(
            entry_id=f"worked:U1-S1:rho{k}", table="worked", unitary="U1", family=SigmaFamily.S1,
            slot=k, channel=kinds[k], predict=preds[k], scaling=scal.get(k, lambda u: np.nan),
            note=notes.get(k, ""),
        )
        for k in range(1, 7)
    ]


_CATALOG = tuple(_build_catalog())


def realization_catalog(table: str | None = None) -> list[ChannelRealization]:
    """Catalog entries, optionally restricted to ``"phdm"``, ``"spon"`` or ``"worked"``."""
    return [e for e in _CATALOG if table is None or e.table == table]


def verify_realization(entry: ChannelRealization, rho, block) -> dict:
    """Compare an entry's prediction with the closed-form transformed qubit."""
    rho = np.asarray(rho, dtype=complex)
    _require_family(rho, entry.family)
    block = as_matrix(block, 2)
    predicted = entry.predict(rho, block)
    exact = transform_closed_form(rho, reduced_unitary(entry.unitary, block))[entry.slot - 1]
    s = complex(entry.scaling(block))
    return {
        "entry_id": entry.entry_id,
        "predicted": predicted,
        "exact": exact,
        "max_abs_deviation": float(np.max(np.abs(predicted - exact))),
        "scaling": s,
        "scaling_modulus": abs(s),
    }


def sweep_realization(entry: ChannelRealization, trials: int, seed=None, real_blocks: bool = False) -> dict:
    """Largest deviation of ``entry`` over random family states and blocks."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = random_sigma(entry.family, rng)
        block = rotation(rng.uniform(0, 2 * np.pi)) if real_blocks else random_unitary(2, rng)
        worst = max(worst, verify_realization(entry, rho, block)["max_abs_deviation"])
    return {"entry_id": entry.entry_id, "max_abs_deviation": worst, "trials": trials, "seed": seed}


# --- quasi-unitary maps ------------------------------------------------------

def correction_lumped_top(u: np.ndarray) -> np.ndarray:
    """Correction for slots whose upper-left entry lumps two levels (slots 1, 2, 6).

    Equals ``E11 - U^dagger E11 U`` for a unitary 2x2 ``U``.
    """
    return _q(abs(u[0, 1]) ** 2, -np.conj(u[0, 0]) * u[0, 1],
              -u[0, 0] * np.conj(u[0, 1]), -abs(u[0, 1]) ** 2)


def correction_lumped_bottom(u: np.ndarray) -> np.ndarray:
    """Correction for slots whose lower-right entry lumps two levels (slots 3, 4, 5).

    Equals ``E22 - U^dagger E22 U``.
    """
    return _q(-abs(u[1, 0]) ** 2, -np.conj(u[1, 0]) * u[1, 1],
              -u[1, 0] * np.conj(u[1, 1]), abs(u[1, 0]) ** 2)


_TOP_SLOTS = (1, 2, 6)


def _correction(slot: int, u: np.ndarray) -> np.ndarray:
    return correction_lumped_top(u) if slot in _TOP_SLOTS else correction_lumped_bottom(u)


@dataclass(frozen=True)
class QuasiCase:
    case: str
    unitary: str
    family: SigmaFamily
    slots: tuple[int, int]
    note: str = ""

    @property
    def weight_level(self) -> int:
        """0-based qutrit level whose population weights the correction."""
        return SPECTATOR_LEVEL[self.unitary]


QUASI_CASES: dict[str, QuasiCase] = {
    "base": QuasiCase("base", "U1", SigmaFamily.S1, (2, 5)),
    "a": QuasiCase("a", "U1", SigmaFamily.S3, (2, 5),
                   note="printed corrections carry the opposite overall sign; the map is the same as the base case"),
    "b": QuasiCase("b", "U2", SigmaFamily.S1, (1, 3)),
    "c": QuasiCase("c", "U2", SigmaFamily.S2, (1, 3)),
    "d": QuasiCase("d", "U3", SigmaFamily.S2, (4, 6),
                   note="printed slot-4 entry reads u12* for u21*; printed slot-6 correction has the wrong sign"),
    "e": QuasiCase("e", "U3", SigmaFamily.S3, (4, 6),
                   note="printed slot-4 entry reads u12* for u21*; printed slot-6 correction has the wrong sign"),
}


def quasi_unitary(rho, case: str, block) -> dict:
    """Quasi-unitary predictions ``U^dagger rho_k U + w * correction`` for one case.

    Returns, per slot, the prediction, the closed-form qubit, the correction
    term and their deviation.
    """
    if case not in QUASI_CASES:
        raise ValueError(f"unknown quasi-unitary case {case!r}; expected one of {sorted(QUASI_CASES)}")
    qc = QUASI_CASES[case]
    rho = np.asarray(rho, dtype=complex)
    _require_family(rho, qc.family)
    b = as_matrix(block, 2)
    exact = transform_closed_form(rho, reduced_unitary(qc.unitary, b))
    weight = rho[qc.weight_level, qc.weight_level].real
    report = {"case": case, "weight": weight, "slots": {}}
    for k in qc.slots:
        corr = weight * _correction(k, b)
        pred = dagger(b) @ qubit_formula(rho, k) @ b + corr
        report["slots"][k] = {
            "predicted": pred,
            "exact": exact[k - 1],
            "correction": corr,
            "max_abs_deviation": float(np.max(np.abs(pred - exact[k - 1]))),
        }
    report["max_abs_deviation"] = max(s["max_abs_deviation"] for s in report["slots"].values())
    return report


# Case used for each slot when none is given.
DEFAULT_EXPANSION_CASE = {1: "b", 3: "b", 2: "base", 5: "base", 4: "d", 6: "d"}


def expansion_sign(slot: int) -> int:
    """Sign of the first-order ``rho_kk * omega * t * sigma_x`` term for a rotation block.

    Fixed by the slot's lumping side, not by the sigma family.
    """
    return 1 if slot in _TOP_SLOTS else -1


def small_time_expansion(rho, slot: int, omega: float, t: float, case: str | None = None) -> dict:
    """First-order approximation of a quasi-unitary qubit under a rotation by ``omega * t``.

    The weight ``rho_kk`` comes from the untouched level: ``k = 2`` for slots
    1 and 3, ``k = 3`` for slots 2 and 5, ``k = 1`` for slots 4 and 6.
    """
    case = case or DEFAULT_EXPANSION_CASE[slot]
    qc = QUASI_CASES[case]
    if slot not in qc.slots:
        raise ValueError(f"case {case!r} covers slots {qc.slots}, not {slot}")
    rho = np.asarray(rho, dtype=complex)
    _require_family(rho, qc.family)
    b = rotation(omega * t)
    weight = rho[qc.weight_level, qc.weight_level].real
    approx = dagger(b) @ qubit_formula(rho, slot) @ b + expansion_sign(slot) * weight * omega * t * SIGMA_X
    exact = transform_closed_form(rho, reduced_unitary(qc.unitary, b))[slot - 1]
    return {"approx": approx, "exact": exact, "residual": float(np.max(np.abs(exact - approx))),
            "weight": weight, "case": case}


def is_reduced_unitary(u, kind: str, tol: float = 1e-12) -> bool:
    """Whether a 3x3 matrix has the block pattern of ``kind`` and is unitary."""
    u = as_matrix(u, 3)
    spec = SPECTATOR_LEVEL[kind]
    pattern = np.zeros((3, 3))
    pattern[spec, spec] = 1.0
    others = [i for i in range(3) if i != spec]
    off = np.ones((3, 3), dtype=bool)
    off[np.ix_(others, others)] = False
    return bool(np.max(np.abs(u[off] - pattern[off])) <= tol and is_unitary(u, tol))
