from __future__ import annotations

import json
import subprocess
import sys

import pytest
from conftest import DATA

from acmcurve.cli import main
from acmcurve.groebner import read_ideal


def test_scan_bounds_text(capsys):
    assert main(["scan-bounds", "3", "7"]) == 0
    out = capsys.readouterr().out
    row7 = next(line for line in out.splitlines() if line.split()[:1] == ["7"])
    assert "(12,19), (13,20)" in row7
    row6 = next(line for line in out.splitlines() if line.split()[:1] == ["6"])
    assert row6.endswith("empty") and "(9,15): 13/2" in row6


def test_scan_bounds_flags_json(capsys):
    assert main(["scan-bounds", "--r-min", "3", "--r-max", "7", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["r"] for r in rows] == [3, 4, 5, 6, 7]
    assert rows[4]["candidates"] == [[12, 19], [13, 20]]
    assert rows[3]["escape"] == {"g": 9, "d": 15, "value": "13/2", "integral": False,
                              "applicable": True, "holds": False}


def test_scan_bounds_conflicting_args():
    with pytest.raises(SystemExit):
        main(["scan-bounds", "3", "7", "--r-min", "4"])


def test_hilbert_command(capsys):
    assert main(["hilbert", str(DATA / "twisted_cubic.ideal")]) == 0
    out = capsys.readouterr().out
    assert "degree 3, genus 0" in out
    assert "Hilbert series: (1 + 2t)/(1-t)^2" in out


def test_groebner_command(tmp_path, capsys):
    out = tmp_path / "gb.ideal"
    assert main(["groebner", str(DATA / "twisted_cubic.ideal"), "--out", str(out)]) == 0
    gb = read_ideal(out)
    assert len(gb) == 3 and gb.ring.names == ("y0", "y1", "y2", "y3")


def test_parse_error_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.ideal"
    bad.write_text("ring 3 31991\nx0^2 + x1*x2\nx0 +* x1\n")
    assert main(["hilbert", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_unknown_flag():
    with pytest.raises(SystemExit) as err:
        main(["verify", "--frobnicate"])
    assert err.value.code == 2


def test_verify_json(tmp_path, capsys):
    out = tmp_path / "rep.json"
    assert main(["verify", "--seed", "1", "--format", "json", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass"
    assert rep["values"]["generator_profile"] == {"2": 9, "3": 2}


def test_bad_prime_exit_code(capsys):
    assert main(["verify", "--prime", "5"]) == 2
    assert "exceed" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "acmcurve", "scan-bounds", "7", "7"],
                         capture_output=True, text=True, check=True)
    assert "(12,19), (13,20)" in res.stdout
