import subprocess
import sys

import pytest

from graphgen.cli import main
from graphgen.driver import read_summary, read_trace
from graphgen.instance import generate, load


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_paper_parameters(tmp_path, capsys):
    path = tmp_path / "inst7.json"
    code, out, _ = run(capsys, "gen", "--seed", 7, "--customers", 30, "--vehicles", 5,
                       "--capacity", 7, "--grid", 100, "-o", path)
    assert code == 0 and out.strip() == str(path)
    assert load(path) == generate(7, 30, 5, 7, 100)


def test_gen_defaults(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(capsys, "gen")
    inst = load(tmp_path / "inst0.json")
    assert code == 0
    assert (inst.n, inst.fleet_size, inst.capacity, inst.grid) == (30, 5, 7, 100)


def test_gen_zero_customers(capsys):
    with pytest.raises(SystemExit) as err:
        main(["gen", "--customers", "0"])
    assert err.value.code == 2


def test_gen_negative_seed(capsys):
    with pytest.raises(SystemExit) as err:
        main(["gen", "--seed", "-1"])
    assert err.value.code == 2


def test_gen_unwritable(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "-o", tmp_path / "missing" / "x.json")
    assert code == 2 and "cannot write" in err


@pytest.fixture
def small(tmp_path, capsys):
    path = tmp_path / "inst3.json"
    assert run(capsys, "gen", "--seed", 3, "--customers", 9, "--vehicles", 3, "--capacity", 3,
               "-o", path)[0] == 0
    return path


def _field(line, key):
    return dict(kv.split("=", 1) for kv in line.split())[key]


def test_solve_both_algorithms(small, tmp_path, capsys):
    code, out_cg, _ = run(capsys, "solve", small, "--algo", "cg", "--out-dir", tmp_path)
    assert code == 0
    code, out_gg, _ = run(capsys, "solve", small, "--algo", "gg", "--seed", 1,
                          "--out-dir", tmp_path)
    assert code == 0
    assert _field(out_gg, "status") == "Converged"
    assert _field(out_cg, "objective") == _field(out_gg, "objective")
    trace = read_trace(tmp_path / "inst3_gg.csv")
    assert len(trace) == int(_field(out_gg, "iterations"))


def test_solve_iteration_cap(small, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", small, "--algo", "cg", "--max-iter", 2,
                       "--out-dir", tmp_path)
    assert code == 3 and _field(out, "status") == "IterationCap"


def test_solve_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "solve", tmp_path / "missing.json", "--algo", "cg")
    assert code == 2 and "missing.json" in err


def test_solve_malformed_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid": 10}')
    code, _, err = run(capsys, "solve", bad, "--algo", "gg")
    assert code == 2 and "depot" in err


def test_solve_requires_algo(small):
    with pytest.raises(SystemExit) as err:
        main(["solve", str(small)])
    assert err.value.code == 2


def test_bench_single(tmp_path, capsys):
    out_dir = tmp_path / "b"
    code, out, _ = run(capsys, "bench", "--count", 1, "--base-seed", 5, "--customers", 8,
                       "--vehicles", 3, "--capacity", 3, "--out-dir", out_dir)
    assert code == 0
    summary = read_summary(out_dir / "summary.csv")
    assert [s["instance"] for s in summary] == ["seed5", "mean", "median"]
    assert (out_dir / "seed5_cg.csv").exists() and (out_dir / "seed5_gg.csv").exists()
    assert load(out_dir / "instances" / "seed5.json") == generate(5, 8, 3, 3, 100)
    assert "seed5" in out


def test_bench_reproducible(tmp_path, capsys):
    args = ["bench", "--seeds", 1, 2, "--customers", 7, "--vehicles", 3, "--capacity", 3]
    run(capsys, *args, "--out-dir", tmp_path / "r1")
    run(capsys, *args, "--out-dir", tmp_path / "r2")
    a = read_summary(tmp_path / "r1" / "summary.csv")
    b = read_summary(tmp_path / "r2" / "summary.csv")
    key = ("instance", "cg_iterations", "gg_iterations", "cg_objective", "gg_objective")
    assert [[r[k] for k in key] for r in a] == [[r[k] for k in key] for r in b]


def test_bench_needs_seeds():
    with pytest.raises(SystemExit) as err:
        main(["bench"])
    assert err.value.code == 2


def test_bench_mismatch_exit_code(tmp_path, capsys, monkeypatch):
    from graphgen import driver
    real = driver.solve_gg

    def broken(instance, params=None):
        res = real(instance, params)
        res.objective += 1.0
        return res

    monkeypatch.setattr(driver, "solve_gg", broken)
    code, _, err = run(capsys, "bench", "--seeds", 1, "--customers", 5, "--vehicles", 2,
                       "--capacity", 3, "--out-dir", tmp_path)
    assert code == 4 and "disagree" in err


def test_module_entry_point(tmp_path):
    path = tmp_path / "m.json"
    proc = subprocess.run([sys.executable, "-m", "graphgen", "gen", "--customers", "4", "-o",
                           str(path)], capture_output=True, text=True)
    assert proc.returncode == 0 and path.exists()
