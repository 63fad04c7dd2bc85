import subprocess
import sys

import pytest

from conftest import FIXTURE_DIR, GOLDEN, ROOT
from iotmm.cli import main
from iotmm.scenario import BUNDLED


def run(*argv):
    proc = subprocess.run([sys.executable, "-m", "iotmm", *argv], capture_output=True, cwd=ROOT)
    return proc.returncode, proc.stdout.decode(), proc.stderr.decode()


def test_micromort(capsys):
    assert main(["micromort", "--vulnerable", "378000000", "--total", "8400000000"]) == 0
    assert "ratio=0.045\n" in capsys.readouterr().out
    assert main(["micromort", "--vulnerable", "0", "--total", "10"]) == 0
    assert "ratio=0\n" in capsys.readouterr().out


def test_micromort_zero_population(capsys):
    assert main(["micromort", "--vulnerable", "5", "--total", "0"]) == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "error" in captured.err


def test_prob_invert(capsys):
    assert main(["prob", "invert", "--ptx", "0.6", "--ptx-given-y", "0.9", "--ptx-given-t", "0.1"]) == 0
    assert "P(T)=0.375\n" in capsys.readouterr().out


def test_prob_forward_zero_vertical(capsys):
    assert main(["prob", "forward", "--pt", "0", "--ptx-given-y", "0.7", "--ptx-given-t", "0.2"]) == 0
    assert "P(Tx)=0.7\n" in capsys.readouterr().out


def test_prob_degenerate(capsys):
    assert main(["prob", "invert", "--ptx", "0.5", "--ptx-given-y", "0.5", "--ptx-given-t", "0.5"]) == 3
    assert "not identifiable" in capsys.readouterr().err


def test_prob_state(capsys):
    assert main(["prob", "state", "--joint", "0.2", "--marginal", "0.4"]) == 0
    assert capsys.readouterr().out == "P(Tx|T,C)=0.5\n"


def test_missing_scenario_file(capsys):
    assert main(["run", "--scenario", "no/such/file.json", "--format", "json"]) == 2


def test_argparse_errors_exit_2():
    code, _, err = run("micromort", "--vulnerable", "x", "--total", "3")
    assert code == 2 and "invalid int" in err


def test_var_golden():
    code, out, _ = run("var", "--scenario", str(FIXTURE_DIR / "var-fixture.json"))
    assert code == 0
    assert out == (GOLDEN / "var-fixture.var.txt").read_text()


def test_var_workers_identical():
    base = run("var", "--scenario", str(FIXTURE_DIR / "var-fixture.json"))
    assert run("var", "--scenario", str(FIXTURE_DIR / "var-fixture.json"), "--workers", "3") == base


def _var_at(out):
    return float(next(line for line in out.splitlines() if line.startswith("var_at_confidence=")).split("=")[1])


def test_var_confidence_monotone():
    path = str(FIXTURE_DIR / "var-fixture.json")
    _, hi, _ = run("var", "--scenario", path, "--confidence", "0.999", "--seed", "5")
    _, lo, _ = run("var", "--scenario", path, "--confidence", "0.5", "--seed", "5")
    assert _var_at(hi) >= _var_at(lo)
    assert "override.confidence=0.999" in hi


def test_var_zero_paths(capsys):
    assert main(["var", "--scenario", str(FIXTURE_DIR / "var-fixture.json"), "--paths", "0"]) == 2


def test_var_needs_config(capsys):
    assert main(["var", "--scenario", str(ROOT / "scenarios" / "gartner-2020.json")]) == 2


def test_run_overrides_recorded(tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = run("run", "--scenario", str(FIXTURE_DIR / "var-fixture.json"), "--paths", "1000", "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert '"override.paths"' in text and '"paths": 1000' in text


def test_vigilante_csv_row():
    code, out, _ = run("run", "--scenario", "scenarios/vigilante-2017.json", "--format", "csv")
    assert code == 0
    assert "vigilante-2017,observation/2017-01,ratio," in out
    assert ",0.0021,published figure 0.0021" in out


@pytest.mark.parametrize("name", BUNDLED)
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_golden_reports(name, fmt):
    code, out, err = run("run", "--scenario", f"scenarios/{name}.json", "--format", fmt)
    assert code == 0, err
    assert out == (GOLDEN / f"{name}.{fmt}").read_text()


def test_version():
    code, out, _ = run("--version")
    assert code == 0 and "scenario schema 1" in out
