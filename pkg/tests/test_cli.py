import json
import subprocess
import sys

import pytest

from lcpattern.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_contains_paper_example(capsys):
    code, out, _ = run(capsys, "contains", "153642", "132")
    assert code == 0 and out.startswith("witness: 1 2 3")


def test_contains_none(capsys):
    code, out, _ = run(capsys, "contains", "1 2 3", "2 1")
    assert code == 0 and out.strip() == "none"


def test_contains_json(capsys):
    _, out, _ = run(capsys, "contains", "153642", "132", "--format", "json")
    assert json.loads(out) == {"contained": True, "witness": [1, 2, 3]}


def test_invalid_permutation_exit_2(capsys):
    code, _, err = run(capsys, "contains", "2 2 1", "1")
    assert code == 2 and "duplicate" in err


def test_lcp(capsys):
    code, out, _ = run(capsys, "lcp", "2413", "3142")
    data = json.loads(out)
    assert code == 0 and data["length"] == 3 and data["pattern"] == "1 3 2"


def test_lcp_monotone(capsys):
    _, out, _ = run(capsys, "lcp", "123", "321", "--method", "monotone")
    assert json.loads(out) == {"length": 1}


def test_lcp_size_guard_exit_3(capsys):
    ident = " ".join(map(str, range(1, 21)))
    code, _, err = run(capsys, "lcp", ident, ident)
    assert code == 3 and "budget" in err


def test_gen(capsys):
    _, a, _ = run(capsys, "gen", "--n", "8", "--seed", "4")
    _, b, _ = run(capsys, "gen", "--n", "8", "--seed", "4")
    assert a == b and sorted(map(int, a.split())) == list(range(1, 9))
    _, g, _ = run(capsys, "gen", "--n", "5", "--m", "3", "--geometric")
    assert len(g.strip().splitlines()) == 3


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "1024", "--m", "3", "--k", "10", "--grid-scale", "auto")
    data = json.loads(out)
    assert code == 0 and data["upper_expectation"] == 174
    assert data["grid_scale"] == pytest.approx(data["optimal_c"])
    assert data["tail_k"] == 10


def test_simulate_csv(capsys, tmp_path):
    out = tmp_path / "runs.csv"
    code, stdout, _ = run(capsys, "simulate", "--n", "50", "100", "--trials", "3", "--seed", "2", "--out", str(out))
    lines = out.read_text().splitlines()
    assert code == 0 and lines[0] == "n,m,trial,seed,method,length,grid_side,runtime_ms"
    assert len(lines) == 7
    assert "fitted_exponent" in json.loads(stdout)


def test_simulate_config_file_with_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_values": [40], "trials": 2, "method": "greedy", "output_format": "json"}))
    _, out, _ = run(capsys, "simulate", "--config", str(cfg), "--trials", "3")
    data = json.loads(out)
    assert len(data) == 3 and data[0]["method"] == "greedy"


def test_simulate_requires_n(capsys):
    code, _, err = run(capsys, "simulate", "--trials", "2")
    assert code == 2


def test_scaling_json(capsys):
    _, out, _ = run(capsys, "scaling", "--n", "100", "1000", "--trials", "3", "--format", "json")
    data = json.loads(out)
    assert data["target_exponent"] == pytest.approx(2 / 3) and len(data["per_n"]) == 2


def test_scaling_csv(capsys):
    _, out, _ = run(capsys, "scaling", "--n", "100", "1000", "--trials", "2")
    assert out.splitlines()[0].startswith("n,trials,mean") and "fitted_exponent" in out


def test_concentration(capsys):
    _, out, _ = run(capsys, "concentration", "--n", "300", "--trials", "5", "--format", "json")
    assert len(json.loads(out)["rows"]) == 1


def test_limit_probe(capsys):
    _, out, _ = run(capsys, "limit-probe", "--n", "500", "--m", "2", "3", "--trials", "2")
    lines = out.strip().splitlines()
    assert lines[0].startswith("m,n,") and len(lines) == 3


def test_argparse_error_exit_2():
    proc = subprocess.run([sys.executable, "-m", "lcpattern", "bounds", "--n", "x", "--m", "2"], capture_output=True)
    assert proc.returncode == 2


def test_bad_grid_scale_exit_2():
    proc = subprocess.run([sys.executable, "-m", "lcpattern", "bounds", "--n", "5", "--m", "2", "--grid-scale", "-3"], capture_output=True)
    assert proc.returncode == 2
