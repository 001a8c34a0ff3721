"""Command-line scenario runner.

Every subcommand writes one document (JSON or CSV) to ``--out`` or stdout.
Exit codes: 0 on success, 1 when a verification suite fails, 2 on invalid
input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as qio
from .channels import channel_from_name, iterate_channel, purity, qubit_entropy, transform_closed_form
from .dynamics import (
    ConvergenceError,
    LevelConfig,
    RelaxationRates,
    StepSizeError,
    TARGET_FAMILY,
    dark_density,
    evolve,
)
from .extraction import SLOTS, extract_all, qubit_formula, slot_entropy
from .matcore import dagger, unitarity_error
from .realizations import reduced_unitary, rotation
from .states import InvalidStateError, SigmaFamily, random_sigma, random_state, random_unitary, validate
from .tomography import (
    ProbabilityTriple,
    coin_shannon,
    coin_tsallis,
    evolved_entropy,
    from_probabilities,
    probability_evolution,
    to_probabilities,
)
from .verification import DEFAULT_TOL, SUITES, run_suite

UNITARY_TOL = 1e-12


class CLIError(Exception):
    pass


def _complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_qutrit(args) -> np.ndarray:
    if args.state:
        rho = qio.load_state(args.state)
        if args.sigma:
            fam = SigmaFamily(args.sigma.upper())
            if fam.residual(rho) > 1e-12:
                raise CLIError(f"state in {args.state} is not in family {fam.value}")
    elif args.sigma:
        rho = random_sigma(args.sigma, args.seed)
    else:
        rho = random_state(3, args.seed)
    try:
        return validate(rho)
    except InvalidStateError as exc:
        raise CLIError(f"invalid state: {exc}") from exc


def _forced_zero_slots(rho: np.ndarray) -> list[int]:
    return [k for k in SLOTS if qubit_formula(rho, k)[0, 1] == 0]


def _qubit_record(k: int, q: np.ndarray) -> dict:
    return {
        "slot": k,
        "rho": qio.matrix_to_json(q),
        "probabilities": list(to_probabilities(q)),
        "entropy": slot_entropy(q),
    }


def cmd_extract(args) -> int:
    rho = _load_qutrit(args)
    qubits = extract_all(rho)
    zeros = _forced_zero_slots(rho)
    if args.format == "csv":
        rows = []
        for k, q in zip(SLOTS, qubits):
            p = to_probabilities(q)
            rows.append([k, q[0, 0].real, q[0, 1].real, q[0, 1].imag, q[1, 1].real, *p,
                         slot_entropy(q), int(k in zeros)])
        _emit(args, qio.rows_to_csv(
            ["slot", "q11", "q12_re", "q12_im", "q22", "p1", "p2", "p3", "entropy", "zero_coherence"], rows))
        return 0
    doc = {
        "state": qio.state_to_json(rho),
        "qubits": [_qubit_record(k, q) | {"zero_coherence": k in zeros} for k, q in zip(SLOTS, qubits)],
    }
    _emit(args, qio.dumps(doc))
    return 0


def _load_unitary(args) -> tuple[np.ndarray, dict]:
    if args.unitary:
        with open(args.unitary) as fh:
            obj = json.load(fh)
        u = qio.matrix_from_json(obj["u"] if "u" in obj else obj["rho"])
        meta = {"source": args.unitary}
    elif args.family:
        u = reduced_unitary(args.family.upper(), rotation(args.theta))
        meta = {"family": args.family.upper(), "theta": args.theta}
    else:
        u = random_unitary(3, args.seed + 1)
        meta = {"random_seed": args.seed}
    if u.shape != (3, 3):
        raise CLIError(f"unitary must be 3x3, got {u.shape}")
    err = unitarity_error(u)
    if err > args.tol:
        raise CLIError(f"matrix is not unitary: max |U^dagger U - I| = {err:.3e}")
    return u, meta


def cmd_transform(args) -> int:
    rho = _load_qutrit(args)
    u, meta = _load_unitary(args)
    before = extract_all(rho)
    after = transform_closed_form(rho, u)
    oracle = extract_all(dagger(u) @ rho @ u)
    dev = float(np.max(np.abs(after - oracle)))
    doc = {
        "state": qio.state_to_json(rho),
        "unitary": {"u": qio.matrix_to_json(u), **meta},
        "qubits_before": [_qubit_record(k, q) for k, q in zip(SLOTS, before)],
        "qubits_after": [_qubit_record(k, q) for k, q in zip(SLOTS, after)],
        "max_oracle_deviation": dev,
    }
    _emit(args, qio.dumps(doc))
    return 0


def cmd_channel(args) -> int:
    try:
        c = channel_from_name(args.kind, args.p)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    r12 = _complex(args.rho12)
    q0 = np.array([[args.rho11, r12], [np.conj(r12), 1 - args.rho11]], dtype=complex)
    try:
        _, traj = iterate_channel(q0, c, args.n)
    except InvalidStateError as exc:
        raise CLIError(f"invalid initial qubit: {exc}") from exc
    header = ["step", "rho11", "rho12_re", "rho12_im", "rho22", "purity", "entropy"]
    rows = [[i, q[0, 0].real, q[0, 1].real, q[0, 1].imag, q[1, 1].real, purity(q), qubit_entropy(q)]
            for i, q in enumerate(traj)]
    if args.format == "csv":
        _emit(args, qio.rows_to_csv(header, rows))
    else:
        doc = {"kind": args.kind, "p": args.p, "n": args.n,
               "steps": [dict(zip(header, r)) for r in rows]}
        _emit(args, qio.dumps(doc))
    return 0


def cmd_verify(args) -> int:
    if args.format != "json":
        raise CLIError("verify only writes JSON")
    report = run_suite(args.suite, args.trials, args.seed, tol=args.tol, perturb=args.perturb)
    _emit(args, qio.dumps(report))
    if not report["passed"]:
        first = next(e for e in report["entries"] if not e["passed"])
        sys.stderr.write(
            f"verification failed: {first['entry_id']} deviation {first['max_abs_deviation']:.3e} "
            f"> tolerance {args.tol:.1e}\n"
        )
        return 1
    return 0


def _initial_for_simulation(args, cfg: LevelConfig) -> np.ndarray:
    if args.initial == "mixed":
        return np.eye(3, dtype=complex) / 3
    if args.initial == "dark":
        return dark_density(cfg)
    if args.initial == "random":
        return random_state(3, args.seed)
    return qio.load_state(args.initial)


def cmd_simulate(args) -> int:
    cfg = LevelConfig(kind=args.config, omega1=args.omega1, omega2=args.omega2,
                      rabi1=args.rabi1, rabi2=args.rabi2, frame=args.frame)
    rates = RelaxationRates(args.g31, args.g32, args.g1, args.g2)
    try:
        rho0 = validate(_initial_for_simulation(args, cfg))
        traj = evolve(rho0, cfg, rates, args.dt, args.t_end, store_every=args.store_every)
    except (StepSizeError, InvalidStateError, ValueError) as exc:
        raise CLIError(str(exc)) from exc
    family = TARGET_FAMILY[cfg.kind]
    ent = traj.slot_entropies()
    header = ["t", *qio.density_columns(), *[f"S{k}" for k in SLOTS]]
    rows = []
    for t, s, e in zip(traj.times, traj.states, ent):
        rows.append([t, *np.column_stack([s.ravel().real, s.ravel().imag]).ravel(), *e])
    summary = {
        "config": cfg.kind,
        "frame": cfg.frame,
        "target_family": family.value,
        "t_end": float(traj.times[-1]),
        "final_residual": family.residual(traj.final),
        "max_level_population": {str(i + 1): float(np.max(traj.states[:, i, i].real)) for i in range(3)},
        "trace_drift": float(np.max(np.abs(np.trace(traj.states, axis1=1, axis2=2) - 1))),
        "min_eigenvalue": traj.min_eigenvalue,
        "final_state": qio.state_to_json(traj.final),
    }
    if args.format == "csv":
        _emit(args, qio.rows_to_csv(header, rows))
    else:
        _emit(args, qio.dumps({"summary": summary, "columns": header, "rows": rows}))
    text = qio.dumps(summary)
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(text)
    else:
        sys.stderr.write(text)
    return 0


def cmd_tomography(args) -> int:
    u11 = _complex(args.u11)
    if args.p is not None:
        triple = ProbabilityTriple(*args.p)
        records = [{"slot": None, "probabilities": list(triple)}]
    else:
        rho = _load_qutrit(args)
        records = [{"slot": k, "probabilities": list(to_probabilities(q))} for k, q in zip(SLOTS, extract_all(rho))]
    try:
        for rec in records:
            t = ProbabilityTriple(*rec["probabilities"])
            rec["rho"] = qio.matrix_to_json(from_probabilities(t))
            rec["evolved"] = list(probability_evolution(t, u11))
            rec["shannon_p3"] = coin_shannon(t.p3)
            rec["tsallis_p3"] = coin_tsallis(t.p3, args.q)
            rec["evolved_entropy"] = evolved_entropy(t.p3, u11)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    _emit(args, qio.dumps({"u11": [u11.real, u11.imag], "q": args.q, "records": records}))
    return 0


def _add_common(p: argparse.ArgumentParser, formats=("json", "csv")) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for any random sampling")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default="json")


def _add_state(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", help="qutrit state JSON file")
    p.add_argument("--sigma", choices=[f.value for f in SigmaFamily] + [f.value.lower() for f in SigmaFamily],
                   help="sigma family; without --state a random member is drawn")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qutrit-channels", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="six qubits, probabilities and entropies of a qutrit")
    _add_state(p)
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("transform", help="closed-form transformed qubits under a qutrit unitary")
    _add_state(p)
    p.add_argument("--unitary", help="JSON file with a 3x3 matrix under key 'u'")
    p.add_argument("--family", choices=["U1", "U2", "U3", "u1", "u2", "u3"])
    p.add_argument("--theta", type=float, default=0.0, help="rotation angle of the 2x2 block")
    p.add_argument("--tol", type=float, default=UNITARY_TOL)
    _add_common(p, ("json",))
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("channel", help="iterate phase or amplitude damping on a qubit")
    p.add_argument("--kind", choices=["phase", "amp"], required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--rho11", type=float, default=0.5)
    p.add_argument("--rho12", default="0.5", help="complex coherence, e.g. 0.3+0.1j")
    _add_common(p)
    p.set_defaults(func=cmd_channel)

    p = sub.add_parser("verify", help="run a randomized verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--perturb", type=float, default=0.0,
                   help="offset added to sampled unitaries (fault injection)")
    _add_common(p, ("json",))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="integrate the three-level master equation")
    p.add_argument("--config", choices=["lambda", "v", "xi"], default="lambda")
    p.add_argument("--omega1", type=float, default=1.0)
    p.add_argument("--omega2", type=float, default=0.0)
    p.add_argument("--rabi1", type=float)
    p.add_argument("--rabi2", type=float)
    p.add_argument("--frame", choices=["rotating", "static"], default="rotating")
    p.add_argument("--g31", type=float, default=1.0)
    p.add_argument("--g32", type=float, default=1.0)
    p.add_argument("--g1", type=float, default=0.5)
    p.add_argument("--g2", type=float, default=0.5)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--t-end", dest="t_end", type=float, default=40.0)
    p.add_argument("--store-every", dest="store_every", type=int, default=10)
    p.add_argument("--initial", default="mixed", help="mixed, dark, random, or a state JSON path")
    p.add_argument("--summary", help="write the convergence summary here instead of stderr")
    _add_common(p, ("csv", "json"))
    p.set_defaults(func=cmd_simulate, format="csv")

    p = sub.add_parser("tomography", help="probability triples and coin entropies")
    _add_state(p)
    p.add_argument("--p", type=float, nargs=3, metavar=("P1", "P2", "P3"))
    p.add_argument("--u11", default="1", help="complex block entry driving the evolution")
    p.add_argument("--q", type=float, default=2.0, help="Tsallis index")
    _add_common(p, ("json",))
    p.set_defaults(func=cmd_tomography)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, ConvergenceError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
