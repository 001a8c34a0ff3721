import csv
import io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from qutrit_channels import io as qio
from qutrit_channels.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def run_json(argv, capsys, schema):
    code, out, err = run(argv, capsys)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, qio.load_schema(schema))
    return doc


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def write_state(path, rho):
    path.write_text(qio.dumps(qio.state_to_json(rho)))
    return str(path)


@pytest.mark.parametrize("name", ["state", "extract", "transform", "channel", "verify", "simulate",
                                  "simulate_summary", "tomography"])
def test_schemas_are_valid(name):
    jsonschema.Draft202012Validator.check_schema(qio.load_schema(name))


def test_extract_maximally_mixed(tmp_path, capsys):
    path = write_state(tmp_path / "mixed.json", np.eye(3) / 3)
    doc = run_json(["extract", "--state", path], capsys, "extract")
    s = [q["entropy"] for q in doc["qubits"]]
    h = -(2 / 3) * np.log(2 / 3) - (1 / 3) * np.log(1 / 3)
    assert s[0] == pytest.approx(h, abs=1e-14) and s[5] == pytest.approx(h, abs=1e-14)
    assert s[0] == pytest.approx(0.63651, abs=1e-5)
    jsonschema.validate(json.loads((tmp_path / "mixed.json").read_text()), qio.load_schema("state"))


def test_extract_flags_forced_zero_slots(tmp_path, capsys):
    rho = np.zeros((3, 3))
    rho[:2, :2] = [[0.5, 0.2], [0.2, 0.5]]
    doc = run_json(["extract", "--state", write_state(tmp_path / "s4.json", rho), "--sigma", "S4"], capsys,
                   "extract")
    flagged = [q["slot"] for q in doc["qubits"] if q["zero_coherence"]]
    assert flagged == [1, 3, 4, 6]


def test_extract_round_trip_is_byte_identical(tmp_path, capsys):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["extract", "--seed", "3", "--out", str(first)]) == 0
    assert main(["extract", "--state", str(first), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_extract_csv(capsys):
    code, out, _ = run(["extract", "--sigma", "S2", "--format", "csv"], capsys)
    rows = read_csv(out)
    assert code == 0 and [int(r["slot"]) for r in rows] == [1, 2, 3, 4, 5, 6]
    assert float(rows[1]["q12_re"]) == 0.0 and rows[1]["zero_coherence"] == "1"


def test_extract_invalid_state_file(tmp_path, capsys):
    path = write_state(tmp_path / "bad.json", np.diag([0.5, 0.5, 0.5]))
    code, _, err = run(["extract", "--state", path], capsys)
    assert code == 2 and "invalid state" in err


def test_extract_is_deterministic(capsys):
    _, a, _ = run(["extract", "--seed", "11"], capsys)
    _, b, _ = run(["extract", "--seed", "11"], capsys)
    assert a == b


def test_transform_theta_zero(capsys):
    doc = run_json(["transform", "--family", "U2", "--theta", "0"], capsys, "transform")
    assert doc["max_oracle_deviation"] == 0.0
    assert doc["qubits_before"] == doc["qubits_after"]


def test_transform_random(capsys):
    doc = run_json(["transform", "--seed", "5"], capsys, "transform")
    assert doc["max_oracle_deviation"] <= 1e-12


def test_transform_u1_sigma1(capsys):
    theta = 0.9
    doc = run_json(["transform", "--family", "U1", "--sigma", "S1", "--theta", str(theta), "--seed", "2"], capsys,
                   "transform")
    rho = qio.matrix_from_json(doc["state"]["rho"])
    after = qio.matrix_from_json(doc["qubits_after"][0]["rho"])
    assert abs(after[0, 1] - np.cos(theta) * rho[0, 2]) < 1e-14


def test_transform_rejects_non_unitary(tmp_path, capsys):
    path = tmp_path / "u.json"
    path.write_text(json.dumps({"u": qio.matrix_to_json(np.diag([1, 1, 1.01]))}))
    code, _, err = run(["transform", "--unitary", str(path)], capsys)
    assert code == 2 and "not unitary" in err


def test_channel_phase_geometric(capsys):
    code, out, _ = run(["channel", "--kind", "phase", "--p", "0.5", "--n", "20", "--format", "csv"], capsys)
    rows = read_csv(out)
    assert code == 0 and len(rows) == 21
    assert list(rows[0]) == ["step", "rho11", "rho12_re", "rho12_im", "rho22", "purity", "entropy"]
    final = complex(float(rows[-1]["rho12_re"]), float(rows[-1]["rho12_im"]))
    assert abs(final) == pytest.approx(0.5 * 2.0**-20, rel=1e-14)


def test_channel_amp_full_decay(capsys):
    doc = run_json(["channel", "--kind", "amp", "--p", "1", "--n", "1", "--rho11", "0.3", "--rho12", "0.2+0.1j"],
                   capsys, "channel")
    last = doc["steps"][-1]
    assert (last["rho11"], last["rho12_re"], last["rho12_im"], last["rho22"]) == (1.0, 0.0, 0.0, 0.0)


def test_channel_zero_steps_echo(capsys):
    _, out, _ = run(["channel", "--kind", "amp", "--p", "0.3", "--n", "0", "--rho11", "0.6",
                     "--rho12", "0.1-0.2j", "--format", "csv"], capsys)
    (row,) = read_csv(out)
    assert float(row["rho11"]) == 0.6 and float(row["rho12_im"]) == -0.2


def test_channel_rejects_probability(capsys):
    code, _, err = run(["channel", "--kind", "phase", "--p", "1.5"], capsys)
    assert code == 2 and "[0, 1]" in err


@pytest.mark.parametrize("suite", ["primes", "phdm", "spon", "quasi", "dilation"])
def test_verify_suites_pass(suite, capsys):
    doc = run_json(["verify", "--suite", suite, "--trials", "30"], capsys, "verify")
    assert doc["passed"] and doc["max_abs_deviation"] <= 1e-12


def test_verify_primes_thousand(capsys):
    doc = run_json(["verify", "--suite", "primes", "--trials", "1000", "--seed", "1"], capsys, "verify")
    assert doc["passed"]


def test_verify_corrupted_unitary_fails(capsys):
    code, out, err = run(["verify", "--suite", "primes", "--trials", "5", "--perturb", "1e-6"], capsys)
    assert code == 1
    assert "verification failed: primes:rho" in err
    doc = json.loads(out)
    assert not doc["passed"]
    jsonschema.validate(doc, qio.load_schema("verify"))


def test_verify_tolerance_flag_controls_exit(capsys):
    code, _, _ = run(["verify", "--suite", "primes", "--trials", "5", "--perturb", "1e-6", "--tol", "1e-3"], capsys)
    assert code == 0


def test_simulate_zero_rates_diagonal_h(tmp_path, capsys):
    summary = tmp_path / "summary.json"
    code, out, _ = run(["simulate", "--initial", "random", "--rabi1", "0", "--rabi2", "0", "--frame", "static",
                        "--g31", "0", "--g32", "0", "--g1", "0", "--g2", "0", "--t-end", "5",
                        "--summary", str(summary)], capsys)
    rows = read_csv(out)
    assert code == 0
    for col in ("rho11_re", "rho22_re", "rho33_re"):
        vals = [float(r[col]) for r in rows]
        assert max(vals) - min(vals) <= 1e-12
    jsonschema.validate(json.loads(summary.read_text()), qio.load_schema("simulate_summary"))


def test_simulate_lambda_defaults_reach_sigma4(capsys):
    code, _, err = run(["simulate"], capsys)
    summary = json.loads(err)
    jsonschema.validate(summary, qio.load_schema("simulate_summary"))
    assert code == 0 and summary["target_family"] == "S4"
    assert summary["final_residual"] < 1e-4


@pytest.mark.parametrize("extra", [[], ["--omega2", "1.5", "--g31", "0", "--g32", "0", "--g1", "0", "--g2", "0"]])
def test_simulate_dark_initial_keeps_level3_empty(extra, capsys):
    code, out, _ = run(["simulate", "--initial", "dark", "--store-every", "1", *extra], capsys)
    rows = read_csv(out)
    assert code == 0
    assert max(abs(float(r["rho33_re"])) for r in rows) <= 1e-10


def test_simulate_json_format(capsys):
    code, out, _ = run(["simulate", "--format", "json", "--t-end", "1", "--config", "xi"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, qio.load_schema("simulate"))
    assert len(doc["columns"]) == len(doc["rows"][0])


def test_simulate_step_size_error(capsys):
    code, _, err = run(["simulate", "--dt", "0.2", "--t-end", "1"], capsys)
    assert code == 2 and "reduce dt" in err


def test_tomography_from_probabilities(capsys):
    doc = run_json(["tomography", "--p", "0.5", "0.5", "1", "--u11", "0.7071067811865476"], capsys, "tomography")
    rec = doc["records"][0]
    assert rec["evolved_entropy"] == pytest.approx(np.log(2), abs=1e-12)
    assert rec["tsallis_p3"] == 0.0


def test_tomography_from_state(capsys):
    doc = run_json(["tomography", "--sigma", "S5", "--seed", "4", "--q", "3"], capsys, "tomography")
    assert [r["slot"] for r in doc["records"]] == [1, 2, 3, 4, 5, 6]


def test_tomography_rejects_outside_ball(capsys):
    code, _, err = run(["tomography", "--p", "1", "1", "1"], capsys)
    assert code == 2 and "Bloch" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qutrit_channels", "verify", "--suite", "dilation", "--trials", "3"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["passed"]
