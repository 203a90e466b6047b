import json
import os
import subprocess
import sys

import pytest

from positivity_lab import acceptance, cli
from positivity_lab.acceptance import CriterionResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_hi(capsys):
    doc = run_json(capsys, "hi", "--fixture", "P2", "--divisor", "2H")
    assert doc["dims"] == [6, 0, 0]
    doc = run_json(capsys, "hi", "--fixture", "F1", "--divisor", "2E+F", "--m-range", "1:4", "--i", "1")
    assert [r["value"] for r in doc["rows"]] == [0, 1, 3, 6]
    doc = run_json(capsys, "hi", "--fixture", "P2", "--coefficients", "0,0,-3", "--i", "2")
    assert doc["value"] == 1


def test_hhat(capsys):
    doc = run_json(capsys, "hhat", "--fixture", "P1xP1", "--class", "H1-H2")
    assert doc["profile"] == ["0", "2", "0"]
    doc = run_json(capsys, "hhat", "--fixture", "F1", "--class", "2E+F", "--engine", "surface", "--i", "1")
    assert doc["value"] == "1"
    doc = run_json(capsys, "hhat", "--fixture", "F1", "--coefficients", "1,2,0,0")
    assert doc["engine"] == "toric" and len(doc["profile"]) == 3


def test_hhat_decimal(capsys):
    doc = run_json(capsys, "hhat", "--fixture", "F2", "--class", "3E+F", "--engine", "surface", "--decimal")
    assert doc["profile"][0] == "1/2"
    assert doc["approximate"]["profile"][0] == "~0.5"


def test_zariski_cones_abc(capsys):
    doc = run_json(capsys, "zariski", "--fixture", "F1", "--class", "2E+F")
    assert doc["positivePart"] == ["1", "1"]
    assert doc["negativePart"] == [{"curve": ["1", "0"], "coefficient": "1"}]
    assert doc["volume"] == "1"
    doc = run_json(capsys, "cones", "--fixture", "F1", "--class", "E+F")
    assert (doc["ample"], doc["nef"], doc["big"], doc["pseff"]) == (False, True, True, True)
    doc = run_json(capsys, "cones", "--fixture", "F1", "--class", "E+F", "--engine", "toric")
    assert (doc["ample"], doc["nef"]) == (False, True)
    doc = run_json(capsys, "abc", "--fixture", "F1", "--class", "2E+F", "--ample", "E+2F")
    assert (doc["a"], doc["b"], doc["c"]) == (1, 1, 1)


def test_scan_json_and_csv(capsys):
    doc = run_json(capsys, "scan", "--fixture", "F1", "--class", "E+2F", "--ample", "E+2F", "--tmax", "1/2", "--steps", "2")
    assert [r["t"] for r in doc["rows"]] == ["0", "1/4", "1/2"]
    assert doc["ampleConsistent"] is True
    code, out, _ = run(capsys, "scan", "--fixture", "F1", "--class", "E+2F", "--ample", "E+2F", "--steps", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "t,hhat0,hhat1,hhat2,firstNonvanishingIndex"


def test_serre_check(capsys):
    doc = run_json(capsys, "serre-check", "--fixture", "P1xP1", "--class", "H1-H2", "--samples", "10")
    assert doc["higherCohomologyVanishesNearby"] is False
    assert doc["witness"] == {"class": ["1", "-1"], "index": 1, "value": "2"}
    assert doc["agreesWithConeTest"] is True


def test_kunneth(capsys):
    doc = run_json(capsys, "kunneth", "--profile1", "1,0", "--profile2", "1,0")
    assert doc["product"] == ["2", "0", "0"]
    doc = run_json(capsys, "kunneth", "--left", "F1", "--left-class", "2E+F", "--right", "P1", "--right-class", "1")
    assert doc["product"] == ["3", "3", "0", "0"]


def test_example33(capsys):
    doc = run_json(capsys, "example33", "--lambda", "3", "--mu", "2")
    assert (doc["a"], doc["b"], doc["c"]) == (2, 2, 1)
    doc = run_json(capsys, "example33", "--lambda", "2", "--mu", "3", "--direct-toric")
    assert (doc["a"], doc["b"], doc["c"]) == (1, 2, 1)
    assert doc["intermediate"]["kunnethMatchesToric"] is True


def test_export_fixture_round_trip(capsys, tmp_path):
    doc = run_json(capsys, "export-fixture", "F1")
    fan_file = tmp_path / "f1.json"
    fan_file.write_text(json.dumps(doc["fan"]))
    div_file = tmp_path / "d.json"
    div_file.write_text(json.dumps({"coefficients": ["1", "2", "0", "0"]}))
    a = run_json(capsys, "hi", "--fan", str(fan_file), "--coefficients", "1,2,0,0")
    b = run_json(capsys, "hi", "--fan", str(fan_file), "--divisor-file", str(div_file))
    c = run_json(capsys, "hi", "--fixture", "F1", "--coefficients", "1,2,0,0")
    assert a["dims"] == b["dims"] == c["dims"]
    model_file = tmp_path / "m.json"
    model_file.write_text(json.dumps(doc["surfaceModel"]))
    z = run_json(capsys, "zariski", "--model", str(model_file), "--class", "2E+F")
    assert z["positivePart"] == ["1", "1"]


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "hhat", "--fixture", "P2", "--class", "H", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["profile"] == ["1", "0", "0"]


@pytest.mark.parametrize(
    "argv",
    [
        ("zariski", "--fixture", "F1", "--class=-E"),
        ("abc", "--fixture", "F1", "--class", "E", "--ample", "E+F"),
        ("hi", "--fixture", "P2", "--divisor", "1/2H"),
        ("hhat", "--fixture", "F1", "--class", "E+F+H"),
        ("example33", "--lambda", "1", "--mu", "2"),
        ("scan", "--fixture", "F1", "--class", "E", "--ample", "E+F"),
        ("hi", "--fixture", "P2", "--coefficients", "1,0"),
    ],
)
def test_precondition_exit_code(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert out == "" and "error" in err


def test_model_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "fan.json"
    bad.write_text(json.dumps({"latticeRank": 2, "rays": [[1, 0], [0, 1]], "maximalCones": [[0, 1]]}))
    code, _, err = run(capsys, "hi", "--fan", str(bad), "--coefficients", "0,0")
    assert code == 2 and "ModelError" in err
    bad.write_text("{not json")
    assert run(capsys, "hi", "--fan", str(bad), "--coefficients", "0,0")[0] == 2
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"basisLabels": ["A", "B"], "intersectionForm": [[1, 0], [0, 1]],
                                 "canonicalClass": ["0", "0"], "moriGenerators": [["1", "0"], ["0", "1"]]}))
    assert run(capsys, "zariski", "--model", str(model), "--class", "A")[0] == 2


def test_soundness_exit_code(capsys, monkeypatch):
    from positivity_lab import toric
    from positivity_lab.errors import SoundnessError

    def boom(*a, **k):
        raise SoundnessError("unbounded cell with nonzero Betti number")

    monkeypatch.setattr(toric, "cohomology", boom)
    code, _, err = run(capsys, "hi", "--fixture", "P2", "--divisor", "H")
    assert code == 3 and "SoundnessError" in err


def test_deterministic_bytes():
    argv = [sys.executable, "-m", "positivity_lab", "scan", "--fixture", "F1", "--class", "2E+F", "--ample", "E+2F", "--steps", "4"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True, env={**os.environ, "POSITIVITY_LAB_THREADS": "3"}).stdout
    assert first == second and first


def test_selftest_reports_failure(capsys, monkeypatch):
    ok = CriterionResult(1, "fine", True, "ok", 0.0, None)
    bad = CriterionResult(2, "broken", False, "mismatch", 0.0, None)
    monkeypatch.setattr(acceptance, "CRITERIA", [lambda: ok, lambda: bad])
    code, out, _ = run(capsys, "selftest")
    assert code == 3
    assert "[PASS] criterion 1" in out and "[FAIL] criterion 2" in out


def test_selftest_passes_when_all_pass(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", [lambda: CriterionResult(1, "fine", True, "ok", 0.0, None)])
    assert run(capsys, "selftest")[0] == 0
