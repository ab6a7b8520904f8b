from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from mapcount.claims import claim_ids, load_manifest
from mapcount.cli import run

sys.path.insert(0, str(Path(__file__).parent))
from make_golden import COMMANDS, GOLDEN, dump, golden_claim, golden_command  # noqa: E402


def _run(argv, capsys):
    code, report = run(["--no-timing"] + argv)
    out = capsys.readouterr()
    return code, report, out


# -- goldens ------------------------------------------------------------------

@pytest.mark.parametrize("claim", sorted(claim_ids()))
def test_claim_golden(claim):
    assert dump(golden_claim(claim)) == (GOLDEN / f"{claim}.json").read_text(encoding="utf-8")


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_command_golden(name):
    assert dump(golden_command(COMMANDS[name])) == (GOLDEN / f"{name}.json").read_text(encoding="utf-8")


def test_report_schema(capsys):
    code, report, out = _run(["oracle", "--edges", "3"], capsys)
    assert code == 0
    obj = json.loads(out.out)
    assert obj["schema"] == "mapcount.report/1"
    assert set(obj) == {"schema", "command", "inputs", "outputs", "conventions", "checks", "passed"}
    assert obj["outputs"]["series"]["text"].startswith("1 + (2ν+1)z + (9ν²+8ν+3)z²")
    run(["oracle", "--edges", "2"])
    assert "timing" in json.loads(capsys.readouterr().out)


# -- exit codes and errors ----------------------------------------------------

def test_usage_errors_exit_2(capsys):
    assert run(["tower"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["reproduce", "no_such_claim"])[0] == 2
    assert run(["reproduce"])[0] == 2
    assert run(["ising", "--order", "0"])[0] == 2
    assert run(["ising", "--order", "4", "--nu-at", "abc"])[0] == 2
    assert "error" in capsys.readouterr().err


def test_order_cap(monkeypatch, capsys):
    monkeypatch.setenv("MAPCOUNT_MAX_ORDER", "10")
    assert run(["tower", "--order", "11"])[0] == 2
    assert "MAPCOUNT_MAX_ORDER" in capsys.readouterr().err
    assert run(["tower", "--order", "10"])[0] == 0


def test_oracle_cap_is_reported(capsys):
    code, _ = run(["oracle", "--edges", "9"])
    assert code == 2


def test_failed_check_exits_1(capsys):
    # the bare one-edge term does not qualify for the coloured tower
    code, report, _ = _run(["tower", "--order", "10", "--coloured", "--normalization", "bare"], capsys)
    assert code == 1 and not report.passed


def test_pretty_output(capsys):
    code, _ = run(["--pretty", "ising", "--order", "4", "--nu-at", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "1 + 3z + 20z² + 177z³ + O(z⁴)" in out
    assert "[PASS]" in out and "{" not in out


def test_ising_specialisations(capsys):
    _, report, _ = _run(["ising", "--order", "5", "--nu-at", "1/2"], capsys)
    assert report.outputs["series"]["coeffs"][1] == "2/1"
    _, report, _ = _run(["ising", "--order", "5", "--slice", "bi", "--nu-at", "0"], capsys)
    assert report.outputs["series"]["coeffs"][:5] == ["0/1", "1/1", "3/1", "12/1", "56/1"]
    code, report, _ = _run(["ising", "--order", "12", "--check-param"], capsys)
    assert code == 0 and report.passed


# -- file round trips ---------------------------------------------------------

def test_guess_and_asympt_from_files(tmp_path, capsys):
    tower = tmp_path / "b.json"
    code, _, out = _run(["tower", "--order", "60"], capsys)
    # a saved tower report yields T first, so extract B as a bare series
    tower.write_text(json.dumps(json.loads(out.out)["outputs"]["B"]))
    code, report, out = _run(["guess", "--series", str(tower), "--degT", "3", "--degZ", "6"], capsys)
    assert code == 0
    curve = tmp_path / "curve.json"
    curve.write_text(out.out)
    assert report.outputs["curve"]["degT"] == 3
    code, report, out = _run(["asympt", "--curve", str(curve), "--series", str(tower)], capsys)
    assert code == 0
    assert report.outputs["asymptotic"]["growth"] == "27/4"


def test_asympt_exact_constant_from_ising_slice(tmp_path, capsys):
    f = tmp_path / "mb.json"
    _, _, out = _run(["ising", "--order", "40", "--slice", "bi", "--nu-at", "0"], capsys)
    f.write_text(out.out)
    code, report, _ = _run(["asympt", "--series", str(f), "--degT", "2", "--degZ", "4"], capsys)
    assert code == 0
    assert report.outputs["asymptotic"]["growth"] == "8/1"
    assert report.outputs["asymptotic"]["constant"] == "3/(2√π)"


def test_guess_rejects_symbolic_series(tmp_path, capsys):
    f = tmp_path / "s.json"
    _, _, out = _run(["ising", "--order", "6"], capsys)
    f.write_text(out.out)
    assert run(["guess", "--series", str(f), "--degT", "2", "--degZ", "2"])[0] == 2


def test_asympt_interval_check(tmp_path, capsys):
    f = tmp_path / "b.json"
    _, _, out = _run(["tower", "--order", "40"], capsys)
    f.write_text(json.dumps(json.loads(out.out)["outputs"]["B"]))
    code, report, _ = _run(["asympt", "--series", str(f), "--degT", "3", "--degZ", "6", "--interval", "0,1/5"],
                           capsys)
    assert code == 0 and report.outputs["singularity"]["rho"] == "4/27"


# -- reproduce ----------------------------------------------------------------

def test_reproduce_list(capsys):
    assert run(["reproduce", "--list"])[0] == 0
    assert capsys.readouterr().out.split() == claim_ids()


def test_manifest_fields():
    m = load_manifest()
    assert m["schema"] == "mapcount.claims/1"
    assert sorted(m["claims"]) == sorted(claim_ids())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mapcount", "--pretty", "oracle", "--edges", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "(9ν²+8ν+3)z²" in proc.stdout
