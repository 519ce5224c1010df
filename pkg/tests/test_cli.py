import json

import pytest

from hgpcert import alist
from hgpcert.cli import main
from hgpcert.codes import cycle_code


@pytest.fixture
def files(tmp_path, rep_code, db_code):
    paths = {}
    for name, H in (("rep", rep_code.H), ("db", db_code.H), ("cyc", cycle_code(4).H)):
        paths[name] = tmp_path / f"{name}.alist"
        alist.write(H, paths[name])
    paths["bad"] = tmp_path / "bad.alist"
    paths["bad"].write_text("3 3\nnot numbers\n")
    return {k: str(v) for k, v in paths.items()}


def run(capsys, *argv):
    status = main(list(argv))
    return status, capsys.readouterr()


def test_analyze(capsys, files):
    status, out = run(capsys, "analyze", files["rep"])
    assert status == 0
    data = json.loads(out.out)
    assert (data["n"], data["m"], data["k"], data["distance"]) == (4, 3, 1, 4)


def test_analyze_text(capsys, files):
    status, out = run(capsys, "analyze", files["rep"], "--format", "text")
    assert out.out.strip() == "n=4 m=3 k=1 k_T=0 d=4"


def test_puncture_and_robust(capsys, files):
    status, out = run(capsys, "puncture", files["rep"], "--e", "1", "--bi")
    assert status == 0 and json.loads(out.out)["bipuncture"] == {"gamma": [0], "delta": [1]}
    status, out = run(capsys, "puncture", files["rep"], "--e", "2")
    assert status == 1
    status, out = run(capsys, "robust", files["rep"])
    assert status == 0 and json.loads(out.out)["verdict"] == "robust"


def test_hgp(capsys, files):
    status, out = run(capsys, "hgp", files["rep"], files["db"])
    data = json.loads(out.out)
    assert status == 0 and data["N"] == 25 and data["k"] == 1


def test_certify_and_verify(capsys, files, tmp_path):
    cert = tmp_path / "cert.json"
    status, _ = run(capsys, "certify", files["rep"], files["db"], "--out", str(cert))
    assert status == 0
    assert json.loads(cert.read_text())["conclusion"] == "clifford_restricted"
    status, out = run(capsys, "verify", str(cert))
    assert status == 0 and json.loads(out.out)["valid"]


def test_certify_toric_is_negative(capsys, files):
    status, out = run(capsys, "certify", files["cyc"], files["cyc"])
    assert status == 1
    assert json.loads(out.out)["conclusion"] == "hypothesis_failed"


def test_survey_csv(capsys):
    status, out = run(capsys, "survey", "--n", "8", "--col-weight", "2", "--row-weight", "4", "--samples", "3", "--format", "csv")
    assert status == 0
    assert out.out.splitlines()[0] == "index,n,k,distance,robust,undecided,in_filter"


def test_counterexample(capsys):
    status, out = run(capsys, "counterexample", "--budget", "0")
    assert status == 0 and json.loads(out.out)["budget_exhausted"]


def test_error_statuses(capsys, files, tmp_path, monkeypatch):
    assert run(capsys, "analyze", str(tmp_path / "nope.alist"))[0] == 5
    assert run(capsys, "analyze", files["bad"])[0] == 4
    assert run(capsys, "analyze")[0] == 2
    assert run(capsys, "analyze", files["rep"], "--format", "csv")[0] == 2
    garbage = tmp_path / "cert.json"
    garbage.write_text("{")
    assert run(capsys, "verify", str(garbage))[0] == 4
    monkeypatch.setenv("HGPCERT_SEARCH_CAP", "zero")
    assert run(capsys, "robust", files["rep"])[0] == 2


def test_undecided_under_env_cap(capsys, tmp_path, monkeypatch):
    from hgpcert.f2core import BitMatrix

    path = tmp_path / "degenerate.alist"
    alist.write(BitMatrix.parse("0010\n0001"), path)
    assert run(capsys, "robust", str(path))[0] == 1
    monkeypatch.setenv("HGPCERT_SEARCH_CAP", "1")
    status, out = run(capsys, "robust", str(path))
    assert status == 3 and json.loads(out.out)["verdict"] == "undecided"
