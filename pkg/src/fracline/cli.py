"""Command-line front end.

    fracline ml-eval      --alpha A [--x-max X --nx N --tol T --out F]
    fracline a0           --alpha A [--tol T --out F]
    fracline kernel-table --alpha A --t T1,T2,... [--x-max X --nx N --out F]
    fracline solve        --alpha A --ic IC --t T1,... [--bc B --x-max X --nx N --out F]
    fracline fd-solve     --alpha A --ic IC --dt DT --n-steps K [--bc B --x-max X --nx N --t ... --out F]
    fracline compare      --alpha A --ic IC --dt DT --n-steps K [--x-max X --nx N --out F]
    fracline decay        --alpha A --ic IC [--bc B --t ... --out F]
    fracline alpha-sweep  --ic IC [--bc B --t T --x-max X --nx N --out F]
    fracline validate     [--out F]

Exit status: 0 on success, 1 when a check fails, 2 on a usage error.
CSV goes to --out when given, otherwise to stdout; reports (key=value)
go to --out for the check commands and to stdout otherwise.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FraclineError, ResolutionWarning, UsageError
from .fdscheme import SchemeConfig, cross_validate, run
from .fracops import GridFunction
from .io import (atomic_write, csv_text, load_initial_condition, report_text, write_csv,
                 write_field, write_kernel_table, write_report)
from .kernel import kernel_eval, kernel_model, normalization_a0
from .solvers import (Report, alpha_continuity_study, decay_study, dirichlet_solve,
                      energy_monotonicity_check, lp_bound_check, neumann_solve)
from .specfun import crossover_point, phi

__all__ = ["RunConfig", "parse_args", "execute", "main", "COMMANDS"]

COMMANDS = ("ml-eval", "a0", "kernel-table", "solve", "fd-solve", "compare", "validate",
            "decay", "alpha-sweep")

REQUIRED = {
    "ml-eval": ("alpha",),
    "a0": ("alpha",),
    "kernel-table": ("alpha", "t_list"),
    "solve": ("alpha", "ic", "t_list"),
    "fd-solve": ("alpha", "ic", "dt", "n_steps"),
    "compare": ("alpha", "ic", "dt", "n_steps"),
    "decay": ("alpha", "ic"),
    "alpha-sweep": ("ic",),
    "validate": (),
}

FLAG = {"alpha": "--alpha", "bc": "--bc", "ic": "--ic", "x_max": "--x-max", "nx": "--nx",
        "t_list": "--t", "dt": "--dt", "n_steps": "--n-steps", "out": "--out", "tol": "--tol"}

A0_MIN_TOL = 1e-10
DECAY_TIMES = tuple(float(v) for v in np.geomspace(1.0, 100.0, 9))
SWEEP_ALPHAS = (0.9, 0.95, 0.99)


@dataclass(frozen=True)
class RunConfig:
    command: str
    alpha: float | None = None
    bc: str = "dirichlet"
    ic: str | None = None
    x_max: float = 10.0
    nx: int = 1000
    t_list: tuple[float, ...] | None = None
    dt: float | None = None
    n_steps: int | None = None
    out: str | None = None
    tol: float = 1e-10

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}", "command")
        for name in REQUIRED[self.command]:
            if getattr(self, name) is None:
                raise UsageError(f"{FLAG[name]} is required for {self.command}", FLAG[name])
        if self.alpha is not None and not (0.0 < self.alpha <= 1.0):
            raise UsageError(f"--alpha must lie in (0, 1], got {self.alpha:g}", "--alpha")
        if self.bc not in ("dirichlet", "neumann"):
            raise UsageError(f"--bc must be dirichlet or neumann, got {self.bc!r}", "--bc")
        if not (self.x_max > 0.0 and math.isfinite(self.x_max)):
            raise UsageError("--x-max must be positive and finite", "--x-max")
        if self.nx < 16:
            raise UsageError(f"--nx must be >= 16, got {self.nx}", "--nx")
        if not self.tol >= 1e-12:
            raise UsageError(f"--tol must be >= 1e-12, got {self.tol:g}", "--tol")
        if self.t_list is not None and (not self.t_list or
                                        any(not (t > 0.0 and math.isfinite(t)) for t in self.t_list)):
            raise UsageError("--t needs positive finite times", "--t")
        if self.dt is not None and not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise UsageError("--dt must be positive", "--dt")
        if self.n_steps is not None and self.n_steps < 1:
            raise UsageError("--n-steps must be >= 1", "--n-steps")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        flag = None
        for f in FLAG.values():
            if f in message:
                flag = f
                break
        raise UsageError(message, flag)


def _times(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fracline", description="Half-line space-fractional diffusion toolkit.",
                allow_abbrev=False)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--alpha", type=float)
    p.add_argument("--bc", default="dirichlet", choices=("dirichlet", "neumann"))
    p.add_argument("--ic", help="CSV file with header x,g, or gauss-bump, tent, box-smooth")
    p.add_argument("--x-max", dest="x_max", type=float, default=10.0)
    p.add_argument("--nx", type=int, default=1000)
    p.add_argument("--t", dest="t_list", type=_times, help="comma-separated times")
    p.add_argument("--dt", type=float)
    p.add_argument("--n-steps", dest="n_steps", type=int)
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=1e-10)
    return p


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    """Parse and validate; raises UsageError naming the offending flag."""
    ns = build_parser().parse_args(argv)
    return RunConfig(**vars(ns))


# ---------------------------------------------------------------------------
# commands


def _emit_csv(cfg: RunConfig, header, rows) -> None:
    if cfg.out:
        write_csv(cfg.out, header, rows)
    else:
        sys.stdout.write(csv_text(header, rows))


def _emit_report(cfg: RunConfig, items) -> None:
    if cfg.out:
        write_report(cfg.out, items)
    else:
        sys.stdout.write(report_text(items))


def _x_grid(cfg: RunConfig) -> np.ndarray:
    return np.linspace(0.0, cfg.x_max, cfg.nx + 1)


def _data(cfg: RunConfig, bc: str | None = None):
    try:
        return load_initial_condition(cfg.ic, cfg.x_max, cfg.nx, bc or cfg.bc)
    except FraclineError as exc:
        raise UsageError(str(exc), "--ic") from exc


def _cmd_ml_eval(cfg: RunConfig) -> int:
    x = _x_grid(cfg)
    z = 0.0 - x ** (1.0 + cfg.alpha) / (1.0 + cfg.alpha)   # no negative zero at x = 0
    xc = crossover_point(cfg.alpha)
    v = phi(cfg.alpha, x)
    rows = [(xi, zi, vi, "series" if xi <= xc else "volterra") for xi, zi, vi in zip(x, z, v)]
    _emit_csv(cfg, ("x", "z", "Phi", "method"), rows)
    return 0


def _cmd_a0(cfg: RunConfig) -> int:
    if cfg.tol < A0_MIN_TOL:
        raise UsageError(f"--tol for a0 must be >= {A0_MIN_TOL:g}", "--tol")
    a0 = normalization_a0(cfg.alpha, cfg.tol)
    _emit_report(cfg, [("alpha", cfg.alpha), ("tol", cfg.tol), ("a0", a0)])
    return 0


def _cmd_kernel_table(cfg: RunConfig) -> int:
    model = kernel_model(cfg.alpha)
    x = _x_grid(cfg)
    t = np.asarray(cfg.t_list)
    values = kernel_eval(model, x[None, :], t[:, None])
    if cfg.out:
        write_kernel_table(cfg.out, x, t, values)
    else:
        rows = ((xi, tk, values[k, i]) for k, tk in enumerate(t) for i, xi in enumerate(x))
        sys.stdout.write(csv_text(("x", "t", "E"), rows))
    return 0


def _cmd_solve(cfg: RunConfig) -> int:
    data = _data(cfg)
    model = kernel_model(cfg.alpha)
    solve = dirichlet_solve if cfg.bc == "dirichlet" else neumann_solve
    field = solve(model, data, _x_grid(cfg), cfg.t_list)
    if cfg.out:
        write_field(cfg.out, field)
    else:
        sys.stdout.write(csv_text(("x", "t", "w"), field.rows()))
    checks = [lp_bound_check(field, data), energy_monotonicity_check(field)]
    sys.stderr.write(report_text(checks))
    return 0


def _scheme(cfg: RunConfig) -> SchemeConfig:
    try:
        return SchemeConfig(cfg.alpha, cfg.x_max / cfg.nx, cfg.dt, cfg.nx, cfg.n_steps)
    except FraclineError as exc:
        raise UsageError(str(exc), "--dt") from exc


def _cmd_fd_solve(cfg: RunConfig) -> int:
    sc = _scheme(cfg)
    data = _data(cfg)
    u0 = np.interp(sc.x, data.g.x, data.g.values, right=0.0)
    record = cfg.t_list if cfg.t_list is not None else None
    field = run(sc, GridFunction(sc.dx, u0), record, neumann=cfg.bc == "neumann")
    if cfg.out:
        write_field(cfg.out, field)
    else:
        sys.stdout.write(csv_text(("x", "t", "w"), field.rows()))
    echo = [(k, v) for k, v in field.meta.items()]
    sys.stderr.write(report_text(echo))
    return 0


def _finish(cfg: RunConfig, report: Report, extra=()) -> int:
    _emit_report(cfg, list(extra) + [report])
    return 0 if report.passed else 1


def _cmd_compare(cfg: RunConfig) -> int:
    sc = _scheme(cfg)
    data = _data(cfg, "dirichlet")
    report = cross_validate(sc, kernel_model(cfg.alpha), data)
    echo = [("alpha", cfg.alpha), ("dx", sc.dx), ("dt", sc.dt), ("beta_ratio", sc.beta_ratio)]
    return _finish(cfg, report, echo)


def _cmd_decay(cfg: RunConfig) -> int:
    data = _data(cfg)
    times = cfg.t_list if cfg.t_list is not None else DECAY_TIMES
    return _finish(cfg, decay_study(kernel_model(cfg.alpha), data, times, kind=cfg.bc))


def _cmd_alpha_sweep(cfg: RunConfig) -> int:
    data = _data(cfg)
    t = cfg.t_list[0] if cfg.t_list else 1.0
    return _finish(cfg, alpha_continuity_study(data, _x_grid(cfg), t, SWEEP_ALPHAS, kind=cfg.bc))


def _cmd_validate(cfg: RunConfig) -> int:
    from .validate import run_all

    lines = run_all(sys.stdout)
    if cfg.out:
        atomic_write(cfg.out, "".join(ln.render() + "\n" for ln in lines))
    return 0 if all(ln.passed for ln in lines) else 1


HANDLERS = {
    "ml-eval": _cmd_ml_eval,
    "a0": _cmd_a0,
    "kernel-table": _cmd_kernel_table,
    "solve": _cmd_solve,
    "fd-solve": _cmd_fd_solve,
    "compare": _cmd_compare,
    "decay": _cmd_decay,
    "alpha-sweep": _cmd_alpha_sweep,
    "validate": _cmd_validate,
}


def execute(cfg: RunConfig) -> int:
    """Run the command; returns the exit status."""
    with warnings.catch_warnings():
        warnings.simplefilter("default", ResolutionWarning)
        return HANDLERS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
        return execute(cfg)
    except UsageError as exc:
        msg = str(exc)
        if exc.flag and exc.flag not in msg:
            msg = f"{exc.flag}: {msg}"
        print(f"fracline: error: {msg}", file=sys.stderr)
        return 2
    except FraclineError as exc:
        print(f"fracline: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
