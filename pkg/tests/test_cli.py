import io
import json

import pytest

from edsmodel.cli import run


def call(*argv, env=None):
    out = io.StringIO()
    code = run(list(argv), out=out, env=env or {})
    return code, out.getvalue()


def test_seq_table():
    code, text = call("seq", "--nmax", "6")
    lines = text.splitlines()
    assert code == 0 and len(lines) == 7
    assert lines[2].split() == ["2", "129/100", "-383/1000", "2^2*5^2"]
    assert lines[4].split()[-1] == "2^4*5^2*383^2"


def test_seq_csv_from_environment():
    code, text = call("seq", env={"EDSMODEL_NMAX": "3", "EDSMODEL_FORMAT": "csv"})
    assert code == 0
    assert text.splitlines() == ["n,x,y,den_x", "1,3,5,1", "2,129/100,-383/1000,2^2*5^2",
                                 "3,164323/29241,-66234835/5000211,3^4*19^2"]


def test_flags_beat_environment():
    code, text = call("seq", "--nmax", "2", "--json", env={"EDSMODEL_NMAX": "5"})
    assert code == 0 and len(json.loads(text)) == 2


def test_times_verdicts_exit_zero(ledger_file):
    code, text = call("model", "times", "2", "3", "6", "--json", "--ledger", ledger_file)
    assert code == 0 and json.loads(text)["verdict"] is True
    code, text = call("model", "times", "2", "3", "7", env={"EDSMODEL_LEDGER": ledger_file})
    assert code == 0 and json.loads(text)["verdict"] is False


def test_error_exit_codes(tmp_path, capsys, ledger_file):
    assert call("seq", "--nmax", "0")[0] == 2
    assert call("seq", "--gen", "3,4")[0] == 2
    assert call("seq", env={"EDSMODEL_NMAX": "many"})[0] == 2
    assert call("ledger", "show", "--ledger", str(tmp_path / "none.json"))[0] == 1
    assert call("model", "square", "5", "--ledger", ledger_file)[0] == 1
    assert "AmbiguousSquare" in capsys.readouterr().err


def test_ledger_build_resume_and_show(tmp_path):
    path = str(tmp_path / "led.json")
    assert call("ledger", "build", "--nmax", "12", "--upto", "6", "--ledger", path)[0] == 0
    code, text = call("ledger", "build", "--nmax", "12", "--ledger", path)
    assert code == 0 and json.loads(text)["indices"] == 12
    first = open(path).read()
    call("ledger", "build", "--nmax", "12", "--ledger", path)
    assert open(path).read() == first
    code, text = call("ledger", "show", "--nmax", "12", "--ledger", path, "--n", "4", "--json")
    assert json.loads(text) == [{"n": 4, "bad": "2^4", "entries": "p5^2 p383^2", "primitive_atoms": 1}]
    # a smaller horizon reads the file but never overwrites it
    code, text = call("ledger", "build", "--nmax", "6", "--ledger", path)
    assert code == 0 and json.loads(text)["persisted"] is False
    assert open(path).read() == first


def test_ring_and_fo_commands(tmp_path, ledger_file):
    L = ("--ledger", ledger_file)
    code, text = call("ring", "check", "--op", "divides", "5", "95", *L)
    assert code == 0 and json.loads(text)["verdict"] is True
    code, text = call("ring", "check", "--op", "member", "1/5", *L)
    assert code == 0 and json.loads(text)["verdict"] is False
    wpath = str(tmp_path / "w.json")
    code, text = call("fo", "prove", "6", "19", "--out", wpath, *L)
    assert code == 0 and json.loads(text)["verify"]["verdict"] is True
    code, text = call("fo", "verify", "35", "6", "19", "--witness", wpath, *L)
    doc = json.loads(text)
    assert code == 0 and doc["verdict"] is False and doc["failed"] == "congruence"
    code, text = call("fo", "challenge", "7", "2", *L)
    assert json.loads(text)["b"] == "19"


def test_indicators_and_density(ledger_file):
    L = ("--ledger", ledger_file)
    code, text = call("indicators", "--lmax", "8", "--format", "csv", *L)
    assert code == 0
    assert text.splitlines()[1:4] == ["2,1,5,1,proven-prime", "3,1,19,2,proven-prime", "2,2,383,3,proven-prime"]
    code, text = call("density", "--xs", "10,100", "--format", "csv", *L)
    assert text.splitlines()[1].startswith("10,1,4,1/4")
    assert call("density", "--xs", "ten", *L)[0] == 2


def test_report_writes_tables_and_figures(tmp_path):
    out = tmp_path / "rep"
    code, text = call("report", "--out", str(out), "--nmax", "12", "--xs", "10,100,1000")
    assert code == 0
    doc = json.loads(text)
    for name in doc["files"]:
        assert (out / name).stat().st_size > 0
    assert (out / "heights.png").read_bytes()[:4] == b"\x89PNG"
    assert (out / "apparition.csv").read_text().splitlines()[1] == "5,2,2"
