import math
import subprocess
import sys

import pytest

from fracline.cli import RunConfig, main, parse_args
from fracline.errors import UsageError


def test_parse_a0_defaults():
    cfg = parse_args(["a0", "--alpha", "0.5"])
    assert cfg == RunConfig(command="a0", alpha=0.5)
    assert (cfg.bc, cfg.x_max, cfg.nx, cfg.tol, cfg.out) == ("dirichlet", 10.0, 1000, 1e-10, None)


def test_parse_full_solve():
    cfg = parse_args("solve --alpha 0.5 --bc neumann --ic gauss-bump --x-max 20 --nx 2000 "
                     "--t 0.5,1,2".split())
    assert cfg.command == "solve"
    assert cfg.bc == "neumann" and cfg.ic == "gauss-bump"
    assert cfg.x_max == 20.0 and cfg.nx == 2000
    assert cfg.t_list == (0.5, 1.0, 2.0)


@pytest.mark.parametrize("argv,flag", [
    ("solve --alpha 1.5 --ic tent --t 1", "--alpha"),
    ("solve --alpha 0 --ic tent --t 1", "--alpha"),
    ("solve --alpha 0.5 --t 1", "--ic"),
    ("kernel-table --alpha 0.5", "--t"),
    ("fd-solve --alpha 0.5 --ic tent --dt 0.001", "--n-steps"),
    ("a0 --alpha 0.5 --nx 8", "--nx"),
    ("a0 --alpha 0.5 --tol 1e-13", "--tol"),
    ("solve --alpha 0.5 --ic tent --t 1,-2", "--t"),
    ("solve --alpha 0.5 --ic tent --t 1 --bc robin", "--bc"),
])
def test_usage_errors_name_the_flag(argv, flag):
    with pytest.raises(UsageError) as info:
        parse_args(argv.split())
    assert info.value.flag == flag


def test_unknown_flag_and_command():
    with pytest.raises(UsageError):
        parse_args(["a0", "--alpha", "0.5", "--beta", "2"])
    with pytest.raises(UsageError):
        parse_args(["frobnicate"])
    # no prefix matching of long options
    with pytest.raises(UsageError):
        parse_args(["a0", "--alph", "0.5"])


def test_exit_codes(capsys):
    assert main(["a0", "--alpha", "1"]) == 0
    report = dict(line.split("=") for line in capsys.readouterr().out.splitlines())
    assert float(report["a0"]) == pytest.approx(0.5 / math.sqrt(math.pi), abs=1e-10)
    assert main(["a0", "--alpha", "2"]) == 2
    assert "--alpha" in capsys.readouterr().err
    # two early times cannot fit the t in [1, 100] decay law
    assert main(["decay", "--alpha", "1", "--ic", "gauss-bump", "--t", "0.01,0.02"]) == 1
    assert "decay.passed=false" in capsys.readouterr().out


def test_a0_tolerance_floor(capsys):
    assert main(["a0", "--alpha", "0.5", "--tol", "1e-11"]) == 2


def test_dirichlet_data_with_nonzero_origin(tmp_path, capsys):
    path = tmp_path / "g.csv"
    path.write_text("x,g\n0,1\n0.5,0.5\n1,0\n")
    assert main(["solve", "--alpha", "0.5", "--ic", str(path), "--t", "1"]) == 2
    assert "g(0) = 0" in capsys.readouterr().err


def test_kernel_table_header_and_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["kernel-table", "--alpha", "0.5", "--t", "0.5,1", "--x-max", "4", "--nx", "16"]
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    lines = a.read_text().splitlines()
    assert lines[0] == "x,t,E"
    assert len(lines) == 1 + 2 * 17
    assert a.read_bytes() == b.read_bytes()


def test_ml_eval_columns(capsys):
    assert main(["ml-eval", "--alpha", "0.5", "--x-max", "8", "--nx", "16"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,z,Phi,method"
    assert lines[1] == "0,0,1,series"
    assert lines[-1].endswith("volterra")


def test_solve_writes_field_and_report(tmp_path, capsys):
    out = tmp_path / "w.csv"
    argv = ["solve", "--alpha", "0.5", "--ic", "tent", "--t", "0.5,1", "--x-max", "4", "--nx", "40",
            "--out", str(out)]
    assert main(argv) == 0
    assert out.read_text().splitlines()[0] == "x,t,w"
    err = capsys.readouterr().err
    assert "lp_bound.passed=true" in err and "energy.passed=true" in err


def test_fd_solve_neumann_echo(capsys):
    argv = ["fd-solve", "--alpha", "0.5", "--bc", "neumann", "--ic", "gauss-bump", "--x-max", "4",
            "--nx", "40", "--dt", "0.001", "--n-steps", "20"]
    assert main(argv) == 0
    captured = capsys.readouterr()
    assert captured.out.splitlines()[0] == "x,t,w"
    assert "variant=neumann-reflection" in captured.err
    assert "extension=true" in captured.err
    assert "n_steps=20" in captured.err


def test_fd_solve_unstable_ratio_is_usage_error(capsys):
    argv = ["fd-solve", "--alpha", "0.5", "--ic", "tent", "--x-max", "4", "--nx", "40",
            "--dt", "0.1", "--n-steps", "2"]
    assert main(argv) == 2
    assert "--dt" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fracline.cli", "a0", "--alpha", "0.5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("alpha=0.5\n")
