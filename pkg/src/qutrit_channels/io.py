"""JSON and CSV encodings.

Matrices are nested row-major lists of ``[re, im]`` pairs; a state file is
``{"dim": d, "rho": [[[re, im], ...], ...]}``.
"""

from __future__ import annotations

import csv
import io
import json
from importlib import resources

import numpy as np


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.ndim != 3 or a.shape[2] != 2:
        raise ValueError("matrix must be a nested list of [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def state_to_json(rho) -> dict:
    rho = np.asarray(rho)
    return {"dim": int(rho.shape[0]), "rho": matrix_to_json(rho)}


def state_from_json(obj) -> np.ndarray:
    """Decode a state object; a document with a top-level ``"state"`` key is unwrapped."""
    if "rho" not in obj and "state" in obj:
        obj = obj["state"]
    rho = matrix_from_json(obj["rho"])
    if rho.shape != (obj["dim"], obj["dim"]):
        raise ValueError(f"declared dim {obj['dim']} does not match matrix shape {rho.shape}")
    return rho


def load_state(path) -> np.ndarray:
    with open(path) as fh:
        return state_from_json(json.load(fh))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def rows_to_csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def density_columns() -> list[str]:
    return [f"rho{i}{j}_{part}" for i in (1, 2, 3) for j in (1, 2, 3) for part in ("re", "im")]


def load_schema(name: str) -> dict:
    """Load one of the bundled JSON schemas, e.g. ``"state"`` or ``"verify"``."""
    text = resources.files("qutrit_channels").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)
