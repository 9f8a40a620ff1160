"""Explicit finite-difference scheme with shifted Grunwald weights.

    u_i^{k+1} = sum_{j<i} b (g_{i+1-j} - g_{i-j}) u_j^k + (1 + b (g_1 - g_0)) u_i^k + b g_0 u_{i+1}^k

for 0 < i < n, with both end values frozen, b = dt / dx**(1+alpha) and
g_0 = 1, g_i = (i-1-alpha)/i * g_{i-1}. The sum over j < i is taken
literally (empty for i = 0, which is frozen anyway).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import fftconvolve

from .errors import ConfigError, DomainError, ResolutionWarning, StabilityError
from .fracops import GridFunction
from .kernel import KernelModel
from .solvers import InitialData, Report, SolutionField, dirichlet_solve, lp_norm
from .specfun import as_alpha, gamma

__all__ = [
    "SchemeConfig",
    "GrunwaldWeights",
    "grunwald_weights",
    "row_sums",
    "weight_invariants",
    "step",
    "run",
    "limit_stencil_report",
    "cross_validate",
    "exact_solution_step_check",
    "TruncationWarning",
]

GROWTH_LIMIT = 1e3
TRUNCATION_FRACTION = 1e-3
_FFT_MIN = 256


class TruncationWarning(ResolutionWarning):
    """The frozen right boundary is not inert for the compared solution."""


@dataclass(frozen=True)
class SchemeConfig:
    alpha: float
    dx: float
    dt: float
    n_cells: int
    n_steps: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.dx > 0.0 and self.dt > 0.0):
            raise ConfigError("dx and dt must be positive")
        if self.n_cells < 2 or self.n_steps < 0:
            raise ConfigError("need n_cells >= 2 and n_steps >= 0")
        if self.beta_ratio * (1.0 + self.alpha) > 1.0 + 1e-12:
            raise ConfigError(
                f"dt/dx^(1+alpha) = {self.beta_ratio:.6g} exceeds 1/(1+alpha) = "
                f"{1.0 / (1.0 + self.alpha):.6g}; the diagonal coefficient would be negative")

    @property
    def beta_ratio(self) -> float:
        return self.dt / self.dx ** (1.0 + self.alpha)

    @property
    def x(self) -> np.ndarray:
        return self.dx * np.arange(self.n_cells + 1)

    @classmethod
    def from_ratio(cls, alpha: float, dx: float, x_max: float, t_end: float,
                   ratio: float) -> "SchemeConfig":
        """Config with dt = ratio * dx**(1+alpha), shortened so t_end is hit exactly."""
        a = as_alpha(alpha)
        dt0 = ratio * dx ** (1.0 + a)
        n_steps = max(1, int(math.ceil(t_end / dt0 - 1e-9)))
        return cls(a, dx, t_end / n_steps, int(round(x_max / dx)), n_steps)


@dataclass(frozen=True)
class GrunwaldWeights:
    alpha: float
    g: np.ndarray

    def __len__(self):
        return len(self.g)


def grunwald_weights(alpha, n: int) -> GrunwaldWeights:
    """g_0..g_n by the recurrence, applied in floating point as written."""
    a = as_alpha(alpha)
    if n < 0:
        raise DomainError("n must be >= 0")
    g = np.empty(n + 1)
    g[0] = 1.0
    for i in range(1, n + 1):
        g[i] = ((i - 1 - a) / i) * g[i - 1]
    g.setflags(write=False)
    return GrunwaldWeights(a, g)


def row_sums(weights: GrunwaldWeights, beta: float, n_cells: int) -> np.ndarray:
    """Sum of the stencil coefficients of each interior row i = 1..n-1.

    The coefficients telescope to 1 + beta * g_{i+1}.
    """
    g = weights.g
    out = np.empty(n_cells - 1)
    for i in range(1, n_cells):
        coeffs = [beta * (g[i + 1 - j] - g[i - j]) for j in range(i)]
        coeffs.append(1.0 + beta * (g[1] - g[0]))
        coeffs.append(beta * g[0])
        out[i - 1] = math.fsum(coeffs)
    return out


def weight_invariants(alpha, n: int = 2000, beta: float = 0.5, n_rows: int = 64) -> dict:
    """Checks on the weights and the stencil rows; values are floats or bools."""
    w = grunwald_weights(alpha, n)
    g = w.g
    a = w.alpha
    partial = np.cumsum(g)
    rs = row_sums(w, beta, n_rows)
    return {
        "g0_is_one": bool(g[0] == 1.0),
        "g1_is_minus_alpha": bool(g[1] == -a),
        "tail_negative": bool(np.all(g[1:] < 0.0)) if a < 1.0 else bool(np.all(g[2:] == 0.0)),
        "partial_sums_in_unit_interval": bool(np.all((partial > 0.0) & (partial <= 1.0))) if a < 1.0 else True,
        "partial_sums_decreasing": bool(np.all(np.diff(partial) <= 0.0)),
        "max_row_sum_deviation": float(np.max(np.abs(rs - 1.0))),
        "max_row_sum_deviation_telescoped": float(np.max(np.abs(rs - 1.0 - beta * g[2:n_rows + 1]))),
    }


def _lower_sum(d: np.ndarray, u: np.ndarray) -> np.ndarray:
    # s_i = sum_{k=1}^{i} d_k u_{i-k}
    n = len(u)
    if n > _FFT_MIN:
        full = fftconvolve(d[:n], u)[:n]
    else:
        full = np.convolve(d[:n], u)[:n]
    return full - d[0] * u


def step(config: SchemeConfig, weights: GrunwaldWeights, u_k: GridFunction) -> GridFunction:
    """One explicit step; end values are copied unchanged."""
    n = config.n_cells
    u = u_k.values
    if len(u) != n + 1:
        raise DomainError(f"expected {n + 1} values, got {len(u)}")
    if len(weights) < n + 1:
        raise DomainError(f"weight table too short: need {n + 1}, have {len(weights)}")
    b = config.beta_ratio
    g = weights.g
    d = g[1:] - g[:-1]               # d_k = g_{k+1} - g_k
    new = u.copy()
    s = _lower_sum(d, u)             # sum_{j<i} (g_{i+1-j} - g_{i-j}) u_j
    new[1:n] = b * s[1:n] + (1.0 + b * (g[1] - g[0])) * u[1:n] + b * g[0] * u[2:n + 1]
    return GridFunction(config.dx, new)


def run(config: SchemeConfig, initial: GridFunction, record: Sequence[float] | None = None,
        neumann: bool = False) -> SolutionField:
    """Advance n_steps steps; record slices at the steps nearest the requested times.

    With ``neumann`` the data are reflected evenly about x = 0 and the scheme
    runs on the doubled grid, of which the right half is returned. This
    variant is an extension; the scheme above is stated for Dirichlet data.
    Raises StabilityError if max|u| exceeds GROWTH_LIMIT times its initial value.
    """
    n = config.n_cells
    if len(initial.values) != n + 1:
        raise DomainError(f"initial data must have {n + 1} values")
    if record is None:
        record = [config.n_steps * config.dt]
    steps_wanted = sorted({min(config.n_steps, int(round(t / config.dt))) for t in record})
    if neumann:
        u = np.concatenate((initial.values[:0:-1], initial.values))
        work = SchemeConfig(config.alpha, config.dx, config.dt, 2 * n, config.n_steps)
    else:
        u = initial.values.copy()
        work = config
    weights = grunwald_weights(config.alpha, work.n_cells + 1)
    limit = GROWTH_LIMIT * max(float(np.max(np.abs(u))), 1e-300)
    state = GridFunction(config.dx, u)
    slices, times = [], []
    for k in range(config.n_steps + 1):
        if k in steps_wanted:
            v = state.values[n:] if neumann else state.values
            slices.append(np.array(v))
            times.append(k * config.dt)
        if k == config.n_steps:
            break
        state = step(work, weights, state)
        if not np.max(np.abs(state.values)) <= limit:
            raise StabilityError(f"max|u| exceeded {GROWTH_LIMIT:g}x its initial value at step {k + 1}")
    meta = {"alpha": config.alpha, "dx": config.dx, "dt": config.dt,
            "beta_ratio": config.beta_ratio, "n_cells": n, "n_steps": config.n_steps}
    if neumann:
        meta["variant"] = "neumann-reflection"
        meta["extension"] = True
    return SolutionField(config.x, np.asarray(times), np.vstack(slices), "fd",
                         "neumann" if neumann else "dirichlet", meta)


def limit_stencil_report(alpha_list: Sequence[float] = (0.01, 0.99), beta: float = 0.45,
                         width: int = 64) -> Report:
    """Effective stencil of one interior row far from the boundary.

    Compares with the upwind transport stencil (1-b, b on u_i, u_{i+1})
    for small alpha and with FTCS (b, 1-2b, b) for alpha near 1. Far-left
    coefficients b (g_{k+1} - g_k), k >= 2, count toward the distance.
    """
    vals = {}
    ok = True
    for a in alpha_list:
        g = grunwald_weights(a, width + 1).g
        left = [beta * (g[k + 1] - g[k]) for k in range(1, width)]   # u_{i-1}, u_{i-2}, ...
        diag = 1.0 + beta * (g[1] - g[0])
        right = beta * g[0]
        if a >= 0.5:
            target_left, target_diag, target_right, ref = beta, 1.0 - 2.0 * beta, beta, "ftcs"
        else:
            target_left, target_diag, target_right, ref = 0.0, 1.0 - beta, beta, "upwind"
        dist = max(abs(left[0] - target_left), abs(diag - target_diag), abs(right - target_right),
                   max((abs(c) for c in left[1:]), default=0.0))
        vals[f"alpha_{a:g}.reference"] = ref
        vals[f"alpha_{a:g}.left"] = left[0]
        vals[f"alpha_{a:g}.diag"] = diag
        vals[f"alpha_{a:g}.right"] = right
        vals[f"alpha_{a:g}.distance"] = dist
        if ref == "ftcs" and a >= 0.99:
            ok = ok and dist <= 1e-2
    return Report("limit_stencil", ok, vals)


def cross_validate(config: SchemeConfig, model: KernelModel, data: InitialData,
                   levels: int = 3) -> Report:
    """FD against the Dirichlet convolution solution at t = n_steps * dt.

    Refines dx by halves ``levels - 1`` times with dt/dx**(1+alpha) fixed and
    reports L1 and Linf distances on the FD nodes and the observed orders.
    """
    if not data.vanishes_at_origin:
        raise DomainError("cross validation uses Dirichlet data with g(0) = 0")
    if abs(model.alpha - config.alpha) > 0.0:
        raise DomainError("model and scheme use different alpha")
    t_end = config.n_steps * config.dt
    x_max = config.n_cells * config.dx
    ratio = config.beta_ratio
    g1 = lp_norm(data.g.values, data.g.x, 1.0)
    l1, linf, dxs = [], [], []
    truncated = False
    for lev in range(levels):
        dx = config.dx / 2 ** lev
        cfg = SchemeConfig.from_ratio(config.alpha, dx, x_max, t_end, ratio)
        x = cfg.x
        u0 = np.interp(x, data.g.x, data.g.values, right=0.0)
        fd = run(cfg, GridFunction(dx, u0), [t_end]).values[-1]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            ref = dirichlet_solve(model, data, x, [t_end]).values[0]
        if abs(ref[-1]) > TRUNCATION_FRACTION * g1:
            truncated = True
        l1.append(lp_norm(fd - ref, x, 1.0))
        linf.append(float(np.max(np.abs(fd - ref))))
        dxs.append(dx)
    if truncated:
        warnings.warn("convolution solution is not negligible at x_max; the frozen right "
                      "boundary affects the comparison", TruncationWarning, stacklevel=2)
    orders = [math.log2(e0 / e1) if e1 > 0.0 else math.inf for e0, e1 in zip(l1[:-1], l1[1:])]
    ok = all(e1 < e0 for e0, e1 in zip(l1[:-1], l1[1:])) and min(orders) >= 0.5
    return Report("cross_validate", ok,
                  {"alpha": config.alpha, "beta_ratio": ratio, "t": t_end, "dx": dxs,
                   "l1": l1, "linf": linf, "order": orders, "truncated": truncated})


def exact_solution_step_check(alpha, dx_list: Sequence[float] = (0.02, 0.01, 0.005, 0.0025),
                              ratio: float = 0.5, x_max: float = 2.0, x_from: float = 0.25,
                              eps: float = 1.0) -> Report:
    """One step applied to v(x, t) = eps c x**(1+alpha) + eps (t - 1), c = 1/((1+alpha) Gamma(1+alpha)).

    v solves the equation exactly, so each interior update should gain
    eps*dt. The error is measured on rows with x >= x_from; the first
    rows next to the frozen left end carry an O(dt) layer and are reported
    separately. Passes when err/(dt*dx) does not grow under halving of dx
    (10% slack), or when the error is at round-off.
    """
    a = as_alpha(alpha)
    c = 1.0 / ((1.0 + a) * gamma(1.0 + a))
    scaled, near_edge, dts = [], [], []
    ok = True
    for dx in dx_list:
        cfg = SchemeConfig.from_ratio(a, dx, x_max, 1.0, ratio)
        x = cfg.x
        u = eps * c * x ** (1.0 + a)
        new = step(cfg, grunwald_weights(a, cfg.n_cells + 1), GridFunction(dx, u)).values
        err = np.abs(new - u - eps * cfg.dt)[1:-1]
        inner = err[x[1:-1] >= x_from]
        scaled.append(float(np.max(inner)) / (cfg.dt * dx))
        near_edge.append(float(np.max(err)) / cfg.dt)
        dts.append(cfg.dt)
        roundoff = 64.0 * np.finfo(float).eps * float(np.max(np.abs(u)))
        if len(scaled) > 1 and scaled[-1] > 1.1 * scaled[-2] and np.max(inner) > roundoff:
            ok = False
    return Report("exact_step", ok, {"alpha": a, "dx": list(dx_list), "dt": dts,
                                     "interior_err_over_dt_dx": scaled,
                                     "edge_err_over_dt": near_edge, "x_from": x_from})
