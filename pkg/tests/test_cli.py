import json
import subprocess
import sys

import numpy as np
import pytest

from bosonbunch.cli import main
from bosonbunch.io import write_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bunch_hom_preset(capsys):
    code, out, _ = run(capsys, "bunch", "--hom", "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "bosonbunch/bunch/1"
    values = {r["state"]: r["bunching"] for r in doc["results"]}
    assert abs(values["indist"] - 0.5) < 1e-12 and abs(values["labelled:1,1"] - 0.25) < 1e-12


def test_bunch_single_state(capsys):
    code, out, _ = run(capsys, "bunch", "--m", "4", "--sites", "1-3", "--subset", "all", "--state", "uniform:0.5,0.5", "--seed", "3")
    doc = json.loads(out)
    assert code == 0 and doc["bunching"] == pytest.approx(1.0)
    assert set(doc) >= {"schema", "manifest", "bunching", "q", "gram_eigs"}
    assert doc["manifest"]["seed"] == 3 and "timestamp" not in doc["manifest"]


def test_bunch_unitary_file(capsys, tmp_path, beamsplitter):
    path = tmp_path / "u.json"
    write_matrix(path, beamsplitter)
    code, out, _ = run(capsys, "bunch", "--unitary", str(path), "--m", "2", "--sites", "1,2", "--subset", "1", "--state", "labelled:1,1", "--seed", "0")
    assert code == 0 and json.loads(out)["bunching"] == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize(
    "argv",
    [
        ["bunch", "--m", "3", "--sites", "1-2", "--state", "irrep:1,2"],
        ["bunch", "--m", "3", "--sites", "1-4"],
        ["bunch", "--m", "3", "--sites", "1-2", "--state", "uniform:0.5,0.6"],
        ["mean", "--n", "2", "--m", "4", "--k", "9", "--alpha", "1"],
        ["thermo", "invert", "--levels", "0,1", "--n", "2", "--m", "4", "--k", "2", "--target", "0.9"],
    ],
)
def test_validation_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv, "--seed", "0")
    assert code == 2 and err.startswith("error:")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bunch", "--bogus"])
    assert exc.value.code == 2


def test_internal_fault_exit_code(capsys, monkeypatch):
    from bosonbunch import InternalConsistencyError, cli

    def boom(*a, **k):
        raise InternalConsistencyError("boom")

    monkeypatch.setattr(cli, "mean_bunch_closed", boom)
    code, _, err = run(capsys, "mean", "--n", "1", "--m", "3", "--k", "1", "--alpha", "1", "--seed", "0")
    assert code == 1 and "boom" in err


def test_mean(capsys):
    code, out, _ = run(capsys, "mean", "--n", "1", "--m", "5", "--k", "2", "--alpha", "0.3,0.7", "--seed", "0")
    assert code == 0 and json.loads(out)["mean_closed"] == pytest.approx(0.4)
    code, out, _ = run(capsys, "mean", "--n", "2", "--m", "3", "--k", "2", "--alpha", "1,1", "--normalize", "--mc", "50", "--seed", "4")
    doc = json.loads(out)
    assert doc["mc"]["num_unitaries"] == 50 and doc["mc"]["std_error"] > 0


def test_threads_do_not_change_output(capsys):
    argv = ["mean", "--n", "2", "--m", "3", "--k", "2", "--alpha", "0.5,0.5", "--mc", "40", "--seed", "8"]
    _, a, _ = run(capsys, *argv, "--threads", "1")
    _, b, _ = run(capsys, *argv, "--threads", "4")
    assert a == b


def test_thermo_curve_and_invert(capsys, monkeypatch):
    code, out, _ = run(capsys, "thermo", "curve", "--levels", "0,1", "--n", "2", "--m", "4", "--k", "2", "--betas", "0:2:5", "--seed", "0")
    lines = out.splitlines()
    assert code == 0 and lines[0].startswith("# ") and lines[1] == "beta,mean_bunching" and len(lines) == 7
    y1 = dict(line.split(",") for line in lines[2:])["1.0"]
    code, out, _ = run(capsys, "thermo", "invert", "--levels", "0,1", "--n", "2", "--m", "4", "--k", "2", "--target", y1, "--seed", "0")
    assert code == 0 and json.loads(out)["beta"] == pytest.approx(1.0, rel=1e-6)
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps({"target": float(y1)})))
    code, out, _ = run(capsys, "thermo", "invert", "--levels", "0,1", "--n", "2", "--m", "4", "--k", "2", "--seed", "0")
    assert code == 0 and json.loads(out)["beta"] == pytest.approx(1.0, rel=1e-6)


def test_lieb(capsys):
    code, out, _ = run(capsys, "lieb", "--n", "4", "--trials", "30", "--seed", "7")
    doc = json.loads(out)
    assert code == 0 and doc["findings"] == [] and "per_trial" not in doc
    assert doc["schema"] == "bosonbunch/lieb/1"


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--hom", "--state", "labelled:1,1", "--seed", "0")
    doc = json.loads(out)
    assert code == 0
    for key in ("bunching_dense", "bunching_perm_sum", "bunching_closed"):
        assert doc[key] == pytest.approx(0.25, abs=1e-12)
    assert sum(r["probability"] for r in doc["distribution"]) == pytest.approx(1.0)


def test_estimate(capsys):
    code, out, _ = run(capsys, "estimate", "--m", "4", "--sites", "1-3", "--state", "labelled:2,1", "--k", "2", "--samples", "4000", "--exact", "--seed", "5")
    doc = json.loads(out)
    assert code == 0 and abs(doc["estimate"] - doc["exact"]) < 4 * doc["std_error"]


def test_chartable_and_probe(capsys):
    code, out, _ = run(capsys, "chartable", "--n", "3", "--seed", "0")
    assert code == 0 and out.splitlines()[1] == 'irrep,3,"2,1","1,1,1"'
    code, out, _ = run(capsys, "schur-probe", "--n", "2", "--m", "3", "--L", "2", "--pairs", "4", "--seed", "1")
    assert code == 0 and len(json.loads(out)["per_trial"]) == 4


def test_out_file_has_timestamp(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "bunch", "--hom", "--seed", "1", "--out", str(path))
    assert code == 0 and out == ""
    assert "timestamp" in json.loads(path.read_text())["manifest"]


def test_seed_drawn_when_absent(capsys):
    code, out, err = run(capsys, "bunch", "--hom")
    seed = int(err.strip().split(": ")[1])
    assert code == 0 and json.loads(out)["manifest"]["seed"] == seed


def test_json_numbers_round_trip(capsys):
    _, out, _ = run(capsys, "bunch", "--m", "5", "--sites", "1-3", "--subset", "2-4", "--state", "uniform:0.2,0.3,0.5", "--seed", "12")
    doc = json.loads(out)
    assert json.loads(json.dumps(doc)) == doc
    assert float(repr(doc["bunching"])) == doc["bunching"]


def test_byte_identical_subprocess_runs():
    argv = [sys.executable, "-m", "bosonbunch", "estimate", "--m", "3", "--sites", "1,2", "--state", "uniform:0.5,0.5", "--k", "2", "--samples", "500", "--seed", "77"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
