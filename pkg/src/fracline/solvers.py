"""Half-line solutions built from the fundamental solution by the method of
images, plus numerical diagnostics of their proven properties.

    w1 = int_0^inf (E(x-y,t) - E(x+y,t)) g(y) dy     (Dirichlet)
    w2 = int_0^inf (E(x-y,t) + E(x+y,t)) g(y) dy     (Neumann)

and the Duhamel terms w3/w4 for a forcing f(y, s). Initial data are the
piecewise-linear interpolants of their samples.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError, ResolutionWarning
from .fracops import GridFunction, caputo_all
from .kernel import KernelModel, kernel_model
from .quadrature import gauss_legendre

__all__ = [
    "InitialData",
    "ForcingData",
    "SolutionField",
    "dirichlet_solve",
    "neumann_solve",
    "duhamel_solve",
    "lp_norm",
    "lp_bound_check",
    "initial_limit_check",
    "decay_study",
    "energy_monotonicity_check",
    "infinite_speed_check",
    "alpha_continuity_study",
    "derivative_bound_check",
    "Report",
]

GL_ORDER = 4
CENTER_START = 1e-3   # first refinement point around the kernel centre, in kernel widths
CENTER_RATIO = 1.25   # geometric growth of panel breakpoints away from the centre


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class InitialData:
    """Compactly supported initial datum g on [0, inf) with its extension type."""

    g: GridFunction
    extension: str = "odd"
    p_norm_exponent: float = 2.0

    def __post_init__(self):
        if self.extension not in ("odd", "even"):
            raise DomainError("extension must be 'odd' or 'even'")
        if self.g.support_end is None:
            raise DomainError("initial data must have compact support (support_end set)")
        if not (self.p_norm_exponent >= 1.0):
            raise DomainError("p must be >= 1 or inf")

    @property
    def vanishes_at_origin(self) -> bool:
        return self.g.values[0] == 0.0

    @property
    def support_length(self) -> float:
        return self.g.support_end * self.g.h

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Grid nodes and values over the support (at least one cell)."""
        end = max(self.g.support_end, 1)
        return self.g.x[:end + 1], self.g.values[:end + 1]

    def with_extension(self, extension: str) -> "InitialData":
        return InitialData(self.g, extension, self.p_norm_exponent)


@dataclass(frozen=True)
class ForcingData:
    """f(y_i, s_k) = values[k, i] on a uniform grid, zero outside it."""

    y_h: float
    s_h: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or min(v.shape) < 2:
            raise DomainError("forcing values must be a 2-D array with at least 2x2 samples")
        if not (self.y_h > 0.0 and self.s_h > 0.0):
            raise DomainError("grid spacings must be positive")
        if not np.all(np.isfinite(v)):
            raise DomainError("forcing contains non-finite values")
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, f: Callable[[np.ndarray, np.ndarray], np.ndarray], y_max: float,
               s_max: float, ny: int, ns: int) -> "ForcingData":
        y = np.linspace(0.0, y_max, ny + 1)
        s = np.linspace(0.0, s_max, ns + 1)
        return cls(y_max / ny, s_max / ns, f(y[None, :], s[:, None]) * np.ones((ns + 1, ny + 1)))

    @property
    def y(self) -> np.ndarray:
        return self.y_h * np.arange(self.values.shape[1])

    @property
    def s_end(self) -> float:
        return self.s_h * (self.values.shape[0] - 1)

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))

    def slice(self, s: float) -> np.ndarray:
        """f(., s) by linear interpolation in s (zero outside the sampled window)."""
        if s < 0.0 or s > self.s_end:
            return np.zeros(self.values.shape[1])
        pos = s / self.s_h
        k = min(int(pos), self.values.shape[0] - 2)
        frac = pos - k
        return (1.0 - frac) * self.values[k] + frac * self.values[k + 1]


@dataclass
class SolutionField:
    """w(x_i, t_k) = values[k, i] with grid metadata and provenance."""

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray
    provenance: str
    boundary_kind: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.t = np.asarray(self.t, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.t), len(self.x)):
            raise DomainError("values must have shape (len(t), len(x))")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("solution contains non-finite values")

    def slice_at(self, t: float) -> np.ndarray:
        k = int(np.argmin(np.abs(self.t - t)))
        return self.values[k]

    def rows(self):
        for k, tk in enumerate(self.t):
            for i, xi in enumerate(self.x):
                yield xi, tk, self.values[k, i]


@dataclass
class Report:
    """Named check with pass flag, measured quantities and a note."""

    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    note: str = ""

    def lines(self) -> list[str]:
        out = [f"{self.name}.passed={str(self.passed).lower()}"]
        for k, v in self.values.items():
            out.append(f"{self.name}.{k}={_fmt(v)}")
        if self.note:
            out.append(f"{self.name}.note={self.note}")
        return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (list, tuple, np.ndarray)):
        return ",".join(_fmt(u) for u in v)
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


# ---------------------------------------------------------------------------
# convolution core


def _threads() -> int:
    raw = os.environ.get("FRACLINE_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def _pmap(func, items: Sequence) -> list:
    n = _threads()
    if n == 1 or len(items) < 2:
        return [func(v) for v in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items))


def _centered_integral(model: KernelModel, y: np.ndarray, gv: np.ndarray,
                       center: float, t: float) -> float:
    """int_{y0}^{y1} E(y - center, t) g(y) dy for piecewise-linear g.

    Breakpoints are the data nodes plus points placed geometrically away
    from the kernel centre, so every panel is short compared with its
    distance to the centre (or with the kernel width near it).
    """
    y0, y1 = y[0], y[-1]
    width = t ** model.gamma_exponent
    reach = (y1 - y0) + abs(center) + width
    k_max = int(math.ceil(math.log(reach / (CENTER_START * width)) / math.log(CENTER_RATIO))) + 1
    d = CENTER_START * width * CENTER_RATIO ** np.arange(max(k_max, 1))
    extra = np.concatenate(([center], center - d, center + d))
    extra = extra[(extra > y0) & (extra < y1)]
    edges = np.union1d(y, extra)
    u, w = gauss_legendre(GL_ORDER)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * u[None, :]).ravel()
    kern = model(nodes - center, t)
    vals = np.interp(nodes, y, gv)
    return float(np.dot((kern * vals).reshape(-1, GL_ORDER) @ w, h))


def _image_solution(model: KernelModel, y: np.ndarray, gv: np.ndarray,
                    x_grid: np.ndarray, t: float, sign: float) -> np.ndarray:
    def one(x):
        direct = _centered_integral(model, y, gv, x, t)
        image = _centered_integral(model, y, gv, -x, t)
        return direct + sign * image
    return np.asarray(_pmap(one, list(x_grid)))


def _check_resolution(model: KernelModel, h: float, t: float) -> None:
    width = t ** model.gamma_exponent
    if width < 2.0 * h:
        warnings.warn(
            f"kernel width {width:.3g} at t={t:g} is below two data cells ({h:.3g}); "
            "the result resolves only the interpolated data",
            ResolutionWarning, stacklevel=3)


def _solve(model: KernelModel, data: InitialData, x_grid, t_grid, sign: float,
           provenance: str, kind: str) -> SolutionField:
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(t_grid <= 0.0):
        raise DomainError("solution times must be positive")
    if np.any(x_grid < 0.0):
        raise DomainError("x grid must lie in [0, inf)")
    y, gv = data.nodes()
    rows = []
    for t in t_grid:
        _check_resolution(model, data.g.h, t)
        rows.append(_image_solution(model, y, gv, x_grid, t, sign))
    return SolutionField(x_grid, t_grid, np.vstack(rows), provenance, kind,
                         {"alpha": model.alpha, "a0": model.a0})


def dirichlet_solve(model: KernelModel, data: InitialData, x_grid, t_grid) -> SolutionField:
    """w1 on x_grid for every t in t_grid (odd reflection of g)."""
    return _solve(model, data.with_extension("odd"), x_grid, t_grid, -1.0, "w1", "dirichlet")


def neumann_solve(model: KernelModel, data: InitialData, x_grid, t_grid) -> SolutionField:
    """w2 on x_grid for every t in t_grid (even reflection of g)."""
    return _solve(model, data.with_extension("even"), x_grid, t_grid, 1.0, "w2", "neumann")


def duhamel_solve(model: KernelModel, forcing: ForcingData, kind: str, x_grid, t_grid,
                  v_panels: int = 10, v_order: int = 6) -> SolutionField:
    """w3 (kind='dirichlet') or w4 (kind='neumann') for the forcing f.

    The time integral uses t - s = t * v**(1+alpha), so ds = t (1+alpha) v**alpha dv,
    with Gauss-Legendre panels in v halving toward v = 0 where the kernel
    width collapses.
    """
    if kind not in ("dirichlet", "neumann"):
        raise DomainError("kind must be 'dirichlet' or 'neumann'")
    if kind == "dirichlet" and np.any(forcing.values[:, 0] != 0.0):
        raise DomainError("the Dirichlet Duhamel term requires f(0, t) = 0")
    sign = -1.0 if kind == "dirichlet" else 1.0
    x_grid = np.asarray(x_grid, dtype=float)
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(t_grid <= 0.0):
        raise DomainError("solution times must be positive")
    a = model.alpha
    y = forcing.y
    edges = np.concatenate(([0.0], 2.0 ** -np.arange(v_panels - 1, -1, -1.0)))
    u, w = gauss_legendre(v_order)
    hv = np.diff(edges)
    v_nodes = (edges[:-1, None] + hv[:, None] * u[None, :]).ravel()
    v_weights = (hv[:, None] * w[None, :]).ravel()
    rows = []
    for t in t_grid:
        acc = np.zeros(len(x_grid))
        for v, wv in zip(v_nodes, v_weights):
            tau = t * v ** (1.0 + a)
            fs = forcing.slice(t - tau)
            if not np.any(fs):
                continue
            jac = t * (1.0 + a) * v ** a
            acc += wv * jac * _image_solution(model, y, fs, x_grid, tau, sign)
        rows.append(acc)
    values = np.vstack(rows)
    bound = t_grid[:, None] * forcing.sup
    meta = {"alpha": a, "a0": model.a0,
            "bound_ok": bool(np.all(np.abs(values) <= bound * (1.0 + 1e-9)))}
    return SolutionField(x_grid, t_grid, values, "w3" if sign < 0 else "w4", kind, meta)


# ---------------------------------------------------------------------------
# diagnostics


def lp_norm(values: np.ndarray, x: np.ndarray, p: float) -> float:
    """Trapezoid-rule L^p norm on the given nodes."""
    v = np.abs(np.asarray(values, dtype=float))
    if math.isinf(p):
        return float(np.max(v))
    return float(trapezoid(v ** p, x) ** (1.0 / p))


def lp_bound_check(field: SolutionField, data: InitialData) -> Report:
    """Each slice norm against 2 ||g||_p (||g||_inf when p = inf)."""
    p = data.p_norm_exponent
    g_norm = lp_norm(data.g.values, data.g.x, p)
    bound = g_norm if math.isinf(p) else 2.0 * g_norm
    norms = [lp_norm(row, field.x, p) for row in field.values]
    ok = all(n <= bound * (1.0 + 1e-12) for n in norms)
    return Report("lp_bound", ok, {"p": p, "bound": bound, "norms": norms})


def _g_prime_norm(data: InitialData, p: float = 1.0) -> float:
    # exact derivative of the piecewise-linear interpolant
    dg = np.diff(data.g.values) / data.g.h
    if math.isinf(p):
        return float(np.max(np.abs(dg)))
    return float((np.sum(np.abs(dg) ** p) * data.g.h) ** (1.0 / p))


def initial_limit_check(model: KernelModel, data: InitialData, x_grid,
                        t_list: Sequence[float] = (0.1, 0.01, 0.001),
                        kind: str = "dirichlet") -> Report:
    """||w(., t) - g||_p along decreasing t.

    Requires a monotone decrease, and the last value within 10x of the
    floor ||g||_p t**(a/(1+a)) + ||g'||_p t**(1/(1+a)) at the smallest t
    (mass that the heavy kernel tail moves away, plus local smoothing).
    Times whose kernel width is below two data cells are replaced by the
    smallest resolved time.
    """
    if kind == "dirichlet" and not data.vanishes_at_origin:
        raise DomainError("the initial limit for Dirichlet data is asserted only when g(0) = 0")
    x_grid = np.asarray(x_grid, dtype=float)
    a = model.alpha
    p = data.p_norm_exponent
    t_res = (2.0 * data.g.h) ** (1.0 + a)
    ts = sorted({max(float(t), t_res) for t in t_list}, reverse=True)
    solve = dirichlet_solve if kind == "dirichlet" else neumann_solve
    field_ = solve(model, data, x_grid, ts)
    g_on_x = np.interp(x_grid, data.g.x, data.g.values, right=0.0)
    dists = [lp_norm(row - g_on_x, x_grid, p) for row in field_.values]
    t_min = ts[-1]
    g_norm = lp_norm(data.g.values, data.g.x, p)
    floor = g_norm * t_min ** (a / (1.0 + a)) + _g_prime_norm(data, p) * t_min ** (1.0 / (1.0 + a))
    mono = all(d2 < d1 for d1, d2 in zip(dists[:-1], dists[1:]))
    ok = mono and dists[-1] <= 10.0 * floor
    return Report("initial_limit", ok, {"t": ts, "distance": dists, "floor": floor,
                                        "monotone": mono})


def decay_study(model: KernelModel, data: InitialData, t_list: Sequence[float],
                x_grid=None, kind: str = "neumann") -> Report:
    """Least-squares slope of log sup|w| against log t, and the bound check.

    The constant is reported as C = sup|w| t**(1/(1+a)) / ||g||_1; the bound
    sup|w| <= 2 a0 t**(-1/(1+a)) ||g||_1 follows from sup E = a0 t**(-1/(1+a)).
    """
    t_list = np.asarray(sorted(t_list), dtype=float)
    if x_grid is None:
        x_grid = np.linspace(0.0, 2.0 * max(data.support_length, 1.0), 81)
    solve = neumann_solve if kind == "neumann" else dirichlet_solve
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        f = solve(model, data, x_grid, t_list)
    sups = np.max(np.abs(f.values), axis=1)
    slope, _ = np.polyfit(np.log(t_list), np.log(sups), 1)
    g1 = lp_norm(data.g.values, data.g.x, 1.0)
    gam = 1.0 / (1.0 + model.alpha)
    consts = sups * t_list ** gam / g1
    bound_ok = bool(np.all(consts <= 2.0 * model.a0 * (1.0 + 1e-9)))
    target = -gam
    ok = abs(slope - target) <= 0.05 * abs(target) and bound_ok
    return Report("decay", ok, {"slope": float(slope), "target": target,
                                "C": float(np.max(consts)), "bound_C": 2.0 * model.a0,
                                "sup": sups, "t": t_list, "bound_ok": bound_ok})


def energy_monotonicity_check(field: SolutionField, rel_tol: float = 1e-6) -> Report:
    """Trapezoid ||w(., t)||_2^2 non-increasing along the stored times."""
    order = np.argsort(field.t)
    energies = np.array([trapezoid(field.values[k] ** 2, field.x) for k in order])
    tol = rel_tol * energies[0]
    increases = np.diff(energies)
    ok = bool(np.all(increases <= tol))
    return Report("energy", ok, {"t": field.t[order], "energy": energies,
                                 "max_increase": float(np.max(increases, initial=0.0))})


def infinite_speed_check(model: KernelModel, data: InitialData,
                         probes: Sequence[float] | None = None,
                         times: Sequence[float] = (0.01, 0.1, 1.0)) -> Report:
    """w2 > 0 at points beyond the support of nonnegative data."""
    if np.any(data.g.values < 0.0) or not np.any(data.g.values > 0.0):
        raise DomainError("infinite-speed check needs nonnegative, nonzero data")
    r = data.support_length
    if probes is None:
        probes = (2.0 * r, 5.0 * r, 10.0 * r)
    probes = np.asarray(probes, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        f = neumann_solve(model, data, probes, times)
    tiny = np.finfo(float).tiny
    ok = bool(np.all(f.values > tiny))
    return Report("infinite_speed", ok, {"probes": probes, "t": np.asarray(times),
                                         "w_min": float(np.min(f.values)),
                                         "values": f.values.ravel()})


def alpha_continuity_study(data: InitialData, x_grid, t: float = 1.0,
                           alpha_list: Sequence[float] = (0.9, 0.95, 0.99),
                           kind: str = "dirichlet") -> Report:
    """||w^alpha - w^1||_1 for alpha approaching 1; must decrease monotonically."""
    x_grid = np.asarray(x_grid, dtype=float)
    solve = dirichlet_solve if kind == "dirichlet" else neumann_solve
    ref = solve(kernel_model(1.0), data, x_grid, [t]).values[0]
    dists = []
    for a in alpha_list:
        w = solve(kernel_model(a), data, x_grid, [t]).values[0]
        dists.append(lp_norm(w - ref, x_grid, 1.0))
    ok = all(d2 < d1 for d1, d2 in zip(dists[:-1], dists[1:]))
    return Report("alpha_continuity", ok, {"alpha": list(alpha_list), "l1_distance": dists})


def derivative_bound_check(model: KernelModel, data: InitialData, x_max: float, nx: int,
                           t_list: Sequence[float] = (0.5, 1.0, 2.0),
                           kind: str = "dirichlet") -> Report:
    """Discrete ||D^a w||_inf <= 4 a0 t**(-1/(1+a)) and ||w_x||_1 <= 2 ||g'||_1.

    D^a w is the L1 Caputo derivative of the slice on a uniform grid with nx
    cells over [0, x_max]; w_x is the first difference.
    """
    x = np.linspace(0.0, x_max, nx + 1)
    h = x[1] - x[0]
    solve = dirichlet_solve if kind == "dirichlet" else neumann_solve
    f = solve(model, data, x, t_list)
    gam = 1.0 / (1.0 + model.alpha)
    gp = _g_prime_norm(data, 1.0)
    caps, caps_bound, dx1 = [], [], []
    for k, t in enumerate(f.t):
        row = f.values[k]
        caps.append(float(np.max(np.abs(caputo_all(GridFunction(h, row), model.alpha)))))
        caps_bound.append(4.0 * model.a0 * t ** (-gam))
        dx1.append(float(np.sum(np.abs(np.diff(row)))))
    cap_ok = all(c <= b for c, b in zip(caps, caps_bound))
    dx_ok = all(d <= 2.0 * gp * (1.0 + 1e-9) for d in dx1)
    return Report("derivative_bounds", cap_ok and dx_ok,
                  {"t": f.t, "caputo_sup": caps, "caputo_bound": caps_bound,
                   "dx_l1": dx1, "dx_bound": 2.0 * gp,
                   "caputo_ok": cap_ok, "dx_ok": dx_ok})
