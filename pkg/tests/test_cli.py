import csv
import json
import subprocess
import sys

import pytest

from miniversal.cli import main

EX11_STARS = [[3, 1], [3, 2], [3, 3], [3, 4], [3, 5], [4, 1], [5, 1], [5, 4], [5, 5]]


def run(tmp_path, job, *args, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(job))
    code = main(["--job", str(path), *args])
    out, err = capsys.readouterr()
    return code, json.loads(out), err


def ex11(field=None, **extra):
    job = {"blocks": {"kind": "jordan", "groups": [{"eigenvalue": 5, "sizes": [3, 2]}]}}
    if field:
        job["field"] = field
    job.update(extra)
    return job


def test_pattern_from_spec(tmp_path, capsys):
    code, out, err = run(tmp_path, ex11(), "--cmd", "pattern", capsys=capsys)
    assert code == 0
    assert out["pattern"]["stars"] == EX11_STARS
    assert out["certificate"] == {"dimT": 16, "starCount": 9, "stackedRank": 25}
    assert "9 stars" in err


def test_pattern_explicit_matrices(tmp_path, capsys):
    code, out, _ = run(tmp_path, {"A": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}, "--cmd", "pattern", capsys=capsys)
    assert code == 0 and len(out["pattern"]["stars"]) == 4
    job = {"field": {"kind": "laurent"}, "A": [["0", "1"], ["0", "0"]]}
    code, out, _ = run(tmp_path, job, "--cmd", "pattern", capsys=capsys)
    assert out["pattern"]["stars"] == [[1, 1], [2, 1]]


def test_not_a_complement_exit_code(tmp_path, capsys):
    job = {"field": {"kind": "padic", "p": 3}, "A": [["0", "1"], ["0", "0"]], "pattern": {"n": 2, "stars": []}}
    code, out, _ = run(tmp_path, job, "--cmd", "pattern", capsys=capsys)
    assert code == 2 and out["error"] == "NotAComplement" and out["dimT"] == 2


def test_radius_modes(tmp_path, capsys):
    job = {"A": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
    _, mn, _ = run(tmp_path, job, "--cmd", "radius", capsys=capsys)
    _, pa, _ = run(tmp_path, job, "--cmd", "radius", "--mode", "particular", capsys=capsys)
    assert mn["rho"] == pytest.approx(2.5275e-3, rel=1e-3)
    assert pa["rho"] < mn["rho"]
    _, one, _ = run(tmp_path, {"A": [[[0, 0]]]}, "--cmd", "radius", capsys=capsys)
    assert one["rho"] == pytest.approx(0.1875)


def test_correctors_command(tmp_path, capsys):
    code, out, _ = run(tmp_path, ex11({"kind": "laurent"}), "--cmd", "correctors", capsys=capsys)
    assert code == 0 and len(out["correctors"]) == 16 and out["mode"] == "particular"


def test_reduce_zero_gives_identity(tmp_path, capsys):
    code, out, _ = run(tmp_path, ex11({"kind": "padic", "p": 5}), "--cmd", "reduce", capsys=capsys)
    assert code == 0
    S = out["result"]["S"]
    assert S == [["1" if i == j else "0" for j in range(5)] for i in range(5)]
    assert out["verification"]["ok"]


def test_reduce_sampled_and_verify_round_trip(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MINIVERSAL_SEED", "17")
    trace = tmp_path / "trace.csv"
    job = ex11({"kind": "laurent", "precision": 24}, X={"sample": {"scale": 0.5}})
    code, out, err = run(tmp_path, job, "--cmd", "reduce", "--trace", str(trace), capsys=capsys)
    assert code == 0, err
    assert out["result"]["bounds"]["S_bound_ok"] and out["result"]["bounds"]["D_bound_ok"]
    rows = list(csv.reader(trace.open()))
    assert rows[0] == ["k", "norm_M", "norm_M_D", "delta_k", "tau_k", "norm_C"]
    code, rep, _ = run(tmp_path, out, "--cmd", "verify", capsys=capsys)
    assert code == 0 and rep["ok"]
    # tamper with S
    out["result"]["S"][0][1] = "1/1000"
    code, rep, err = run(tmp_path, out, "--cmd", "verify", capsys=capsys)
    assert code == 1 and not rep["checks"]["recomputed_equal"] and "FAILED" in err


def test_reduce_complex_round_trip(tmp_path, capsys):
    job = ex11(X={"sample": {"scale": 0.5, "seed": 4}})
    code, out, _ = run(tmp_path, job, "--cmd", "reduce", capsys=capsys)
    assert code == 0
    code, rep, _ = run(tmp_path, out, "--cmd", "verify", capsys=capsys)
    assert code == 0 and rep["ok"]


def test_outside_radius_exit_code(tmp_path, capsys):
    job = {"A": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]], "X": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]]}
    code, out, err = run(tmp_path, job, "--cmd", "reduce", capsys=capsys)
    assert code == 3 and out["error"] == "OutsideRadius" and out["rho"] > 0
    assert "radius" in err


def test_radius_boundary_exit_code(tmp_path, capsys):
    job = {"A": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]}
    _, rad, _ = run(tmp_path, job, "--cmd", "radius", capsys=capsys)
    job["X"] = [[[rad["rho"], 0], [0, 0]], [[0, 0], [0, 0]]]
    code, _, _ = run(tmp_path, job, "--cmd", "reduce", capsys=capsys)
    assert code == 3


def test_no_convergence_exit_code(tmp_path, capsys):
    job = ex11(X={"sample": {"scale": 0.5, "seed": 1}})
    code, out, _ = run(tmp_path, job, "--cmd", "reduce", "--k-max", "1", capsys=capsys)
    assert code == 4 and out["error"] == "NoConvergence" and out["result"]["trace"]


def test_monitor_violation_exit_code(tmp_path, capsys):
    # a negative margin understates epsilon, so ||X|| already exceeds tau_1
    job = ex11(X={"sample": {"scale": 0.9, "seed": 2}}, options={"margin": -0.5})
    code, out, _ = run(tmp_path, job, "--cmd", "reduce", capsys=capsys)
    assert code == 5 and out["error"] == "MonitorViolation"


def test_lemma_dims(tmp_path, capsys):
    job = {
        "field": {"kind": "laurent"},
        "lemma": [
            {"p": [1, 0], "q": [1, -1], "r": 1, "s": 1},
            {"p": [1, 0], "q": [1, 0], "r": 2, "s": 1},
            {"p": [1, 0], "q": [1, 0], "r": 1, "s": 2},
        ],
    }
    code, out, _ = run(tmp_path, job, "--cmd", "lemma-dims", capsys=capsys)
    assert code == 0 and [c["dim"] for c in out["cases"]] == [1, 1, 1]


def test_bad_input_exit_code(tmp_path, capsys):
    code, out, _ = run(tmp_path, {"A": [[1, 2]], "blocks": {}}, "--cmd", "pattern", capsys=capsys)
    assert code == 1 and out["error"] == "JobError"


def test_usage_error_does_not_collide_with_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["--cmd", "pattern"])
    assert err.value.code == 1


def test_deterministic_exact_output(tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(ex11({"kind": "padic", "p": 5, "precision": 20}, X={"sample": {"seed": 9}})))
    cmd = [sys.executable, "-m", "miniversal.cli", "--job", str(path), "--cmd", "reduce"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["verification"]["ok"]
