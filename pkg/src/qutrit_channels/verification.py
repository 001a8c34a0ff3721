"""Randomized verification suites comparing closed forms with their oracles.

Each suite returns a JSON-ready report.  ``perturb`` adds a fixed offset to
every sampled unitary before the comparison; it exists to exercise the
failure path and should be left at zero otherwise.
"""

from __future__ import annotations

import numpy as np

from .channels import AmplitudeDamping, PhaseDamping, apply_named_channel, dilation_oracle, transform_closed_form
from .extraction import qubit_formula
from .matcore import dagger
from .realizations import QUASI_CASES, quasi_unitary, realization_catalog, rotation, sweep_realization
from .states import random_sigma, random_state, random_unitary

SUITES = ("primes", "phdm", "spon", "quasi", "dilation")
DEFAULT_TOL = 1e-12


def _conjugate_then_extract(rho, u):
    rp = dagger(u) @ rho @ u
    return np.stack([qubit_formula(rp, k) for k in range(1, 7)])


def suite_primes(trials: int, seed: int, perturb: float = 0.0) -> list[dict]:
    rng = np.random.default_rng(seed)
    worst = np.zeros(6)
    for _ in range(trials):
        rho = random_state(3, rng)
        u = random_unitary(3, rng)
        closed = transform_closed_form(rho, u + perturb)
        oracle = _conjugate_then_extract(rho, u)
        worst = np.maximum(worst, np.max(np.abs(closed - oracle), axis=(1, 2)))
    return [{"entry_id": f"primes:rho{k}", "max_abs_deviation": float(worst[k - 1]),
             "trials": trials, "seed": seed} for k in range(1, 7)]


def suite_table(table: str, trials: int, seed: int) -> list[dict]:
    out = []
    for i, entry in enumerate(realization_catalog(table)):
        rep = sweep_realization(entry, trials, seed=seed + i)
        rep["seed"] = seed + i
        out.append(rep)
    return out


def suite_quasi(trials: int, seed: int) -> list[dict]:
    out = []
    for i, (name, qc) in enumerate(QUASI_CASES.items()):
        rng = np.random.default_rng(seed + i)
        worst = 0.0
        for t in range(trials):
            rho = random_sigma(qc.family, rng)
            block = random_unitary(2, rng) if t % 2 == 0 else rotation(rng.uniform(0, 2 * np.pi))
            worst = max(worst, quasi_unitary(rho, name, block)["max_abs_deviation"])
        out.append({"entry_id": f"quasi:{name}", "max_abs_deviation": worst, "trials": trials,
                    "seed": seed + i})
    return out


def suite_dilation(trials: int, seed: int) -> list[dict]:
    rng = np.random.default_rng(seed)
    qubits = [random_state(2, rng) for _ in range(trials)]
    out = []
    for cls, name in ((PhaseDamping, "phase"), (AmplitudeDamping, "amplitude")):
        worst = 0.0
        for p in np.linspace(0.0, 1.0, 11):
            c = cls(float(p))
            for q in qubits:
                worst = max(worst, float(np.max(np.abs(dilation_oracle(q, c) - apply_named_channel(q, c)))))
        out.append({"entry_id": f"dilation:{name}", "max_abs_deviation": worst, "trials": trials,
                    "seed": seed})
    return out


def run_suite(suite: str, trials: int, seed: int, tol: float = DEFAULT_TOL, perturb: float = 0.0) -> dict:
    if suite == "primes":
        entries = suite_primes(trials, seed, perturb)
    elif suite in ("phdm", "spon"):
        entries = suite_table(suite, trials, seed)
    elif suite == "quasi":
        entries = suite_quasi(trials, seed)
    elif suite == "dilation":
        entries = suite_dilation(trials, seed)
    else:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    for e in entries:
        e["passed"] = bool(e["max_abs_deviation"] <= tol)
    return {
        "suite": suite,
        "trials": trials,
        "seed": seed,
        "tolerance": tol,
        "passed": all(e["passed"] for e in entries),
        "max_abs_deviation": max(e["max_abs_deviation"] for e in entries),
        "entries": entries,
    }
