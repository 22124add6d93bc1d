import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from wignerepr.cli import main
from wignerepr.phasespace import WignerFunction, reconstruct
from wignerepr.qstate import DensityMatrix, bell_state, random_density


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_state_bell(capsys):
    code, out, _ = run(capsys, "state", "--bell")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 4 and data["num_qubits"] == 2
    assert DensityMatrix.from_json(data) == bell_state()


def test_state_basis_and_mixed(capsys):
    _, out, _ = run(capsys, "state", "--basis", "q=0", "--n", "1")
    np.testing.assert_array_equal(DensityMatrix.from_json(json.loads(out)).matrix, [[1, 0], [0, 0]])
    _, out, _ = run(capsys, "state", "--mixed", "--n", "2")
    np.testing.assert_array_equal(DensityMatrix.from_json(json.loads(out)).matrix, np.eye(4) / 4)


def test_state_bad_params(capsys):
    code, out, err = run(capsys, "state", "--basis", "z=0")
    assert code == 1 and out == "" and err
    code, _, _ = run(capsys, "state")
    assert code == 1


def test_wigner_bell_csv(capsys):
    code, out, _ = run(capsys, "wigner", "--bell", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 16
    values = [float(r["value"]) for r in rows]
    assert values.count(-0.125) == 4 and values.count(0.125) == 12


def test_wigner_basis_ascii(capsys):
    _, out, _ = run(capsys, "wigner", "--basis", "q=0", "--n", "1", "--format", "ascii")
    lines = out.splitlines()
    assert [float(x) for x in lines[1].split()[1:]] == [0.5, 0.5]
    assert [float(x) for x in lines[2].split()[1:]] == [0.0, 0.0]
    assert lines[1].split()[0] == "0" and lines[2].split()[0] == "1"


def test_wigner_ascii_golden(capsys):
    _, out, _ = run(capsys, "wigner", "--bell", "--format", "ascii")
    assert out == (
        "q\\p      00      01      10      11\n"
        "00   0.1250  0.1250  0.1250  0.1250\n"
        "01   0.1250 -0.1250 -0.1250  0.1250\n"
        "10   0.1250 -0.1250 -0.1250  0.1250\n"
        "11   0.1250  0.1250  0.1250  0.1250\n"
    )


def test_wigner_file_round_trip(capsys, tmp_path, rng):
    rho = random_density(2, rng)
    state_file = tmp_path / "state.json"
    state_file.write_text(json.dumps(rho.to_json()))
    _, out, _ = run(capsys, "wigner", "--in", str(state_file), "--format", "json")
    W = WignerFunction.from_json(json.loads(out))
    np.testing.assert_allclose(reconstruct(W).matrix, rho.matrix, atol=1e-12)
    wfile = tmp_path / "w.json"
    wfile.write_text(out)
    _, out2, _ = run(capsys, "wigner", "--wigner-in", str(wfile), "--reconstruct")
    np.testing.assert_allclose(DensityMatrix.from_json(json.loads(out2)).matrix, rho.matrix, atol=1e-12)


def test_wigner_json_bit_identical(capsys, tmp_path):
    _, out, _ = run(capsys, "wigner", "--bell", "--format", "json")
    W = WignerFunction.from_json(json.loads(out))
    assert json.dumps(W.to_json(), indent=2) + "\n" == out


def test_wigner_partial_transpose(capsys):
    _, out, _ = run(capsys, "wigner", "--bell", "--partial-transpose", "2", "--format", "json")
    values = json.loads(out)["values"]
    assert sorted(set(values)) == [0.0, 0.25]


def test_wigner_invalid_state_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 2, "num_qubits": 1, "entries": [[1, 0], [0, 0], [0, 0], [0.1, 0]]}))
    code, _, err = run(capsys, "wigner", "--in", str(bad))
    assert code == 2
    assert "trace" in err
    malformed = tmp_path / "m.json"
    malformed.write_text(json.dumps({"dim": 2}))
    assert run(capsys, "wigner", "--in", str(malformed))[0] == 2


def test_check_reports_defects(capsys, tmp_path):
    bad = tmp_path / "psd.json"
    bad.write_text(json.dumps({"dim": 2, "entries": [[0.5, 0], [0.6, 0], [0.6, 0], [0.5, 0]]}))
    code, out, _ = run(capsys, "check", "--in", str(bad))
    assert code == 2
    report = json.loads(out)
    assert report["valid"] is False
    assert report["violations"]["psd"] == pytest.approx(-0.1)
    good = tmp_path / "good.json"
    good.write_text(json.dumps(bell_state().to_json()))
    assert run(capsys, "check", "--in", str(good))[0] == 0


def test_check_no_communication(capsys):
    code, out, _ = run(capsys, "check", "--no-communication", "Q1")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_measure(capsys):
    code, out, _ = run(capsys, "measure", "--bell", "--measure", "Q1=1")
    assert code == 0
    data = json.loads(out)
    assert data["event"]["prior_prob"] == pytest.approx(0.5)
    v = np.array(data["wigner"]["values"]).reshape(2, 2, 2, 2)
    assert v[1, 0, 1, 1] == pytest.approx(0.25)
    assert v[0, 0, 0, 0] == 0


def test_epr_quantum_probe(capsys):
    code, out, _ = run(capsys, "epr", "--quantum", "--measure", "Q1=0", "--probe", "P1,P2")
    assert code == 0
    assert out.strip().splitlines()[-1] == "probe P1,P2 after Q1=0: non-m-local (deviation 0.25)"


def test_epr_classical_probe(capsys):
    _, out, _ = run(capsys, "epr", "--classical", "--measure", "Q1=0", "--probe", "P1,P2")
    assert out.strip().splitlines()[-1] == "probe P1,P2 after Q1=0: m-local (deviation 0)"


def test_epr_json(capsys):
    code, out, err = run(
        capsys, "epr", "--quantum", "--measure", "Q1=0", "--probe", "P1,P2", "--probe", "Q1,Q2", "--format", "json"
    )
    assert code == 0
    data = json.loads(out)
    assert [s["label"] for s in data["trace"]["steps"]] == ["a", "b"]
    assert [r["verdict"] for r in data["reports"]] == ["non-m-local", "m-local"]
    assert data["reports"][0]["max_deviation"] == pytest.approx(0.25)
    assert len(err.strip().splitlines()) == 2


def test_epr_seeded_deterministic(capsys):
    args = ("epr", "--quantum", "--measure", "Q1", "--seed", "42", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    event = json.loads(a)["trace"]["steps"][1]["event"]
    assert event["outcome"] in (0, 1)


def test_epr_scenario_file(capsys, tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"kind": "classical", "plan": [
        {"subsystem": 1, "axis": "Q", "outcome": 1},
        {"subsystem": 1, "axis": "P", "outcome": 0},
    ]}))
    code, out, _ = run(capsys, "epr", "--scenario", str(f), "--format", "json")
    assert code == 0
    steps = json.loads(out)["trace"]["steps"]
    assert [s["label"] for s in steps] == ["a", "b", "d"]
    probs = np.array(steps[-1]["state"]["probs"]).reshape(2, 2, 2, 2)
    assert probs[1, 0, 1, 0] == 1.0


def test_epr_impossible_outcome(capsys):
    code, _, err = run(capsys, "epr", "--classical", "--measure", "Q1=0", "--measure", "Q2=1")
    assert code == 3
    assert "prior probability 0" in err


def test_usage_errors(capsys):
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "epr", "--quantum", "--measure", "Q1")[0] == 1
    assert run(capsys, "epr", "--quantum", "--measure", "X1=0")[0] == 1
    assert run(capsys, "epr", "--quantum", "--measure", "Q1=0", "--probe", "Q1,P1")[0] == 1
    assert run(capsys, "epr", "--measure", "Q1=0")[0] == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wignerepr", "epr", "--quantum", "--measure", "Q1=0", "--probe", "P1,P2"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "non-m-local" in proc.stdout
