import json
import subprocess
import sys

import pytest

from msiopto.cli import main
from msiopto.tables import parse_table

FAST = ["--set", "sweep.count=5"]


def test_sweep_to_stdout(capsys):
    assert main(["sweep-detuning", *FAST]) == 0
    table = parse_table(capsys.readouterr().out)
    assert table.grid_name == "detuning_over_gamma"
    assert len(table.grid) == 5


@pytest.mark.parametrize("command", ["sweep-detuning", "sweep-power", "sweep-membrane",
                                     "sweep-srm", "couplings", "spectrum"])
def test_every_subcommand_writes_json(command, tmp_path):
    out = tmp_path / "out.json"
    assert main([command, *FAST, "--format", "json", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"meta", "grid", "columns"}
    assert len(doc["grid"]["values"]) == 5


def test_set_and_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# cooled run\npoint.power = 0.2\nsweep.count = 3\n")
    assert main(["sweep-detuning", "--config", str(cfg), "--set", "point.position=2"]) == 0
    meta = parse_table(capsys.readouterr().out).meta
    assert meta["config"]["point.power"] == 0.2
    assert meta["config"]["point.position"] == "2"


def test_output_is_byte_stable(tmp_path):
    out = tmp_path / "a.csv"
    assert main(["couplings", *FAST, "--out", str(out)]) == 0
    first = out.read_bytes()
    assert main(["couplings", *FAST, "--out", str(out)]) == 0
    assert out.read_bytes() == first


@pytest.mark.parametrize("argv", [
    ["sweep-power", "--set", "sweep.count=1"],
    ["sweep-power", "--set", "bogus.key=1"],
    ["sweep-power", "--set", "optics.r_m2=abc"],
    ["sweep-power", "--config", "/nonexistent/run.cfg"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "config error" in capsys.readouterr().err


def test_runtime_error_exits_1(tmp_path, capsys):
    assert main(["couplings", *FAST, "--out", str(tmp_path / "missing" / "x.csv")]) == 1
    assert "cannot write" in capsys.readouterr().err


def test_defaults_lists_every_key(capsys):
    assert main(["defaults"]) == 0
    out = capsys.readouterr().out
    assert "optics.r_m2 = 0.17" in out and "mech.q_m = 580000.0" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "msiopto", "couplings", *FAST],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.splitlines()[-1].count(",") == 6
