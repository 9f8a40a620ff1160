"""Validation suite behind ``fracline validate``.

Every numbered acceptance criterion has a function returning one or more
``Line`` records (label, pass flag, measured detail); the module suites
cover the remaining invariants of each module. Resolutions are fixed at
desk scale: the whole run takes a few minutes on one core, dominated by
building the profile tables for about fifteen values of alpha.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable, Iterable, TextIO

import numpy as np
from scipy.integrate import trapezoid
from scipy.special import ndtr

from .errors import ResolutionWarning, SmoothnessWarning
from .fdscheme import (SchemeConfig, cross_validate, exact_solution_step_check, grunwald_weights,
                       limit_stencil_report, run, weight_invariants)
from .fracops import (GridFunction, caputo, caputo_all, caputo_deriv_x_all, caputo_monomial,
                      frac_integral, scaling_check)
from .kernel import holder_quotients, kernel_eval, kernel_model, mass, self_similarity_residual
from .profiles import BUILTIN_PROFILES, gauss_bump
from .solvers import (ForcingData, InitialData, alpha_continuity_study, decay_study,
                      derivative_bound_check, dirichlet_solve, duhamel_solve,
                      energy_monotonicity_check, infinite_speed_check, initial_limit_check,
                      lp_bound_check, lp_norm, neumann_solve)
from .specfun import (MLParams, crossover_point, kernel_params, kernel_profile, log_gamma, ml_eval,
                      phi, phi_series, phi_volterra, profile_invariants)

__all__ = ["Line", "CRITERIA", "MODULE_SUITES", "run_criterion", "run_all", "heat_image_oracle",
           "standard_data"]

DATA_H = 0.01


@dataclass
class Line:
    label: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.label}" + (f" :: {self.detail}" if self.detail else "")


def _g(v: float) -> str:
    return f"{v:.3g}"


def _orders(errs: list[float]) -> list[float]:
    return [math.log2(e0 / e1) for e0, e1 in zip(errs[:-1], errs[1:])]


def standard_data(name: str = "gauss-bump", bc: str = "dirichlet", p: float = 2.0) -> InitialData:
    """A built-in profile sampled with spacing DATA_H on its support [0, 1]."""
    n = int(round(1.0 / DATA_H))
    g = GridFunction.sample(BUILTIN_PROFILES[name], DATA_H, n, compact=True)
    return InitialData(g, "odd" if bc == "dirichlet" else "even", p)


def heat_image_oracle(data: InitialData, x: np.ndarray, t: float, sign: float) -> np.ndarray:
    """Closed-form heat-equation image solution for piecewise-linear data.

    Integrates (c0 + c1 y) against the Gaussian of variance 2t on every cell,
    with the image centred at -x; sign = -1 for Dirichlet, +1 for Neumann.
    """
    y, gv = data.nodes()
    s = math.sqrt(2.0 * t)
    c1 = np.diff(gv) / np.diff(y)
    c0 = gv[:-1] - c1 * y[:-1]

    def part(center):
        u0 = (y[:-1, None] - center[None, :]) / s
        u1 = (y[1:, None] - center[None, :]) / s
        dens = np.exp(-0.5 * u0 ** 2) - np.exp(-0.5 * u1 ** 2)
        cells = ((c0[:, None] + c1[:, None] * center[None, :]) * (ndtr(u1) - ndtr(u0))
                 + c1[:, None] * s * dens / math.sqrt(2.0 * math.pi))
        return cells.sum(axis=0)

    x = np.asarray(x, dtype=float)
    return part(x) + sign * part(-x)


# ---------------------------------------------------------------------------
# acceptance criteria


def criterion_1() -> list[Line]:
    z = np.linspace(0.0, 40.0, 401)
    p = MLParams(1.0, 2.0, 1.0)
    rel = max(abs(ml_eval(p, -v) - math.exp(-v / 2)) / math.exp(-v / 2) for v in z)
    a0 = kernel_model(1.0).a0
    ref = 1.0 / (2.0 * math.sqrt(math.pi))
    return [Line("C1 E_{1,2,1}(-z) = exp(-z/2), z in [0,40], rel <= 1e-12", rel <= 1e-12,
                 f"max rel err {_g(rel)}"),
            Line("C1 a0(alpha=1) = 1/(2 sqrt(pi)) within 1e-6", abs(a0 - ref) <= 1e-6,
                 f"|a0 - ref| = {_g(abs(a0 - ref))}")]


def criterion_2() -> list[Line]:
    out = []
    for a in (0.25, 0.5, 0.75):
        m = kernel_model(a)
        ms = [mass(m, t) for t in (0.5, 1.0, 2.0)]
        dev = max(abs(v - 0.5) for v in ms)
        var = max(ms) - min(ms)
        out.append(Line(f"C2 mass alpha={a}: |M-1/2| <= 1e-4, spread <= 1e-6",
                        dev <= 1e-4 and var <= 1e-6, f"max dev {_g(dev)}, spread {_g(var)}"))
    return out


def criterion_3() -> list[Line]:
    x = np.geomspace(1e-3, 50.0, 2000)
    out = []
    for a in np.round(np.arange(0.1, 0.95, 0.1), 10):
        v = phi(a, x)
        pos = bool(np.all(v > 0.0))
        dec = bool(np.all(np.diff(v) < 0.0))
        xp = x * v
        bnd = bool(np.all(xp <= 2.0))
        out.append(Line(f"C3 kernel shape alpha={a:g}: positive, decreasing, x*Phi <= 2",
                        pos and dec and bnd,
                        f"min Phi {_g(v.min())}, max x*Phi {_g(xp.max())}"))
    return out


def ode_residual(a: float, h: float, x_max: float = 10.0, x_min: float = 0.1) -> float:
    """max |D^a Phi + x Phi/(1+a)| over nodes in [x_min, x_max] with spacing h."""
    n = int(round(x_max / h))
    g = GridFunction.sample(lambda s: phi(a, s), h, n)
    r = caputo_all(g, a) + g.x * g.values / (1.0 + a)
    return float(np.max(np.abs(r[g.x >= x_min - 1e-12])))


def criterion_4() -> list[Line]:
    out = []
    for a in (0.3, 0.5, 0.7):
        errs = [ode_residual(a, h) for h in (0.02, 0.01, 0.005)]
        orders = _orders(errs)
        need = min(1.0, 2.0 - a) - 0.2
        ok = all(e1 < e0 for e0, e1 in zip(errs[:-1], errs[1:])) and min(orders) >= need
        out.append(Line(f"C4 ODE residual alpha={a}: order >= {need:.2f}", ok,
                        f"residuals {[_g(e) for e in errs]}, orders {[_g(o) for o in orders]}"))
    return out


def power_rule_errors(beta_exp: float, a: float, hs=(0.01, 0.005, 0.0025, 0.00125)) -> list[float]:
    exact = caputo_monomial(beta_exp, a, 1.0)
    errs = []
    for h in hs:
        n = int(round(1.0 / h))
        g = GridFunction.sample(lambda s: s ** beta_exp, h, n)
        errs.append(abs(caputo(g, a, n) - exact))
    return errs


def criterion_5() -> list[Line]:
    out = []
    for b, a in ((1.0, 0.5), (1.5, 0.3), (2.0, 0.7)):
        errs = power_rule_errors(b, a)
        scale = caputo_monomial(b, a, 1.0)
        need = 2.0 - a - 0.2
        if max(errs) <= 1e-13 * scale:
            # the rule integrates piecewise-linear data exactly
            out.append(Line(f"C5 power rule beta={b:g} alpha={a}: exact to round-off", True,
                            f"max err {_g(max(errs))}"))
            continue
        orders = _orders(errs)
        out.append(Line(f"C5 power rule beta={b:g} alpha={a}: order >= {need:.2f}",
                        min(orders) >= need,
                        f"errors {[_g(e) for e in errs]}, orders {[_g(o) for o in orders]}"))
    return out


def criterion_6() -> list[Line]:
    out = []
    for a in (0.25, 0.5, 0.75, 1.0):
        m = kernel_model(a)
        r = max(self_similarity_residual(m, lam) for lam in (0.125, 8.0))
        out.append(Line(f"C6 self-similarity alpha={a:g}, lambda in {{1/8, 8}}: <= 1e-9",
                        r <= 1e-9, f"max residual {_g(r)}"))
    return out


def criterion_7() -> list[Line]:
    out = []
    x = np.linspace(0.0, 20.0, 401)
    ts = (0.1, 0.5, 1.0, 2.0)
    m = kernel_model(0.5)
    d = standard_data()
    g1 = lp_norm(d.g.values, d.g.x, 1.0)
    w1 = dirichlet_solve(m, d, x, ts)
    w2 = neumann_solve(m, d, x, ts)
    edge = float(np.max(np.abs(w1.values[:, 0])))
    out.append(Line("C7 |w1(0,t)| <= 1e-10 ||g||_1", edge <= 1e-10 * g1, f"max |w1(0,t)| {_g(edge)}"))
    for p in (1.0, 2.0, math.inf):
        dp = InitialData(d.g, "odd", p)
        reps = [lp_bound_check(f, dp) for f in (w1, w2)]
        worst = max(max(r.values["norms"]) / r.values["bound"] for r in reps)
        out.append(Line(f"C7 L^p stability p={p:g}: slice norms <= 2||g||_p",
                        all(r.passed for r in reps), f"max norm/bound {_g(worst)}"))
    m1 = kernel_model(1.0)
    worst = 0.0
    for name in ("gauss-bump", "tent"):
        dd = standard_data(name)
        xs = np.linspace(0.0, 4.0, 201)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            for solve, sign in ((dirichlet_solve, -1.0), (neumann_solve, 1.0)):
                f = solve(m1, dd, xs, (0.01, 0.1, 1.0))
                for k, t in enumerate(f.t):
                    worst = max(worst, float(np.max(np.abs(f.values[k] - heat_image_oracle(dd, xs, t, sign)))))
    out.append(Line("C7 alpha=1 against the Gaussian image solution, Linf <= 1e-6", worst <= 1e-6,
                    f"max err {_g(worst)}"))
    return out


def criterion_8() -> list[Line]:
    out = []
    ts = np.geomspace(1.0, 100.0, 9)
    d = standard_data(bc="neumann")
    for a in (0.5, 0.75, 1.0):
        r = decay_study(kernel_model(a), d, ts)
        rel = abs(r.values["slope"] - r.values["target"]) / abs(r.values["target"])
        out.append(Line(f"C8 decay slope alpha={a:g} within 5% of -1/(1+alpha)", r.passed,
                        f"slope {_g(r.values['slope'])}, rel dev {_g(rel)}, "
                        f"C {_g(r.values['C'])} <= 2a0 {_g(r.values['bound_C'])}"))
    return out


def criterion_9() -> list[Line]:
    x = np.linspace(0.0, 20.0, 401)
    ts = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0)
    worst, fails, runs = -math.inf, [], 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        for a in (0.5, 1.0):
            m = kernel_model(a)
            for name in BUILTIN_PROFILES:
                for bc, solve in (("dirichlet", dirichlet_solve), ("neumann", neumann_solve)):
                    r = energy_monotonicity_check(solve(m, standard_data(name, bc), x, ts))
                    runs += 1
                    rel = r.values["max_increase"] / r.values["energy"][0]
                    worst = max(worst, rel)
                    if not r.passed:
                        fails.append(f"{name}/{bc}/alpha={a:g}")
    return [Line(f"C9 energy non-increasing within 1e-6 of initial ({runs} runs)", not fails,
                 f"largest relative increase {_g(worst)}" + (f", failing {fails}" if fails else ""))]


def criterion_10() -> list[Line]:
    out = []
    d = standard_data(bc="neumann")
    for a in (0.25, 0.5, 0.75):
        r = infinite_speed_check(kernel_model(a), d, probes=(2.0, 5.0, 10.0))
        out.append(Line(f"C10 w2 > 0 at x in {{2,5,10}}, t in {{0.01,0.1,1}}, alpha={a}", r.passed,
                        f"min w2 {_g(r.values['w_min'])}"))
    return out


def criterion_11() -> list[Line]:
    out = []
    for bc in ("dirichlet", "neumann"):
        r = derivative_bound_check(kernel_model(0.5), standard_data(bc=bc), 10.0, 1000, kind=bc)
        v = r.values
        cr = max(c / b for c, b in zip(v["caputo_sup"], v["caputo_bound"]))
        dr = max(v["dx_l1"]) / v["dx_bound"]
        out.append(Line(f"C11 derivative bounds alpha=0.5 {bc}", r.passed,
                        f"max caputo/bound {_g(cr)}, max ||w_x||_1/bound {_g(dr)}"))
    return out


def criterion_12() -> list[Line]:
    out = []
    alphas = (0.25, 0.5, 0.75, 1.0)
    inv = {a: weight_invariants(a) for a in alphas}
    ok = all(v["g0_is_one"] and v["g1_is_minus_alpha"] and v["tail_negative"]
             and v["partial_sums_in_unit_interval"] and v["partial_sums_decreasing"]
             for v in inv.values())
    out.append(Line("C12 weights: g0 = 1, g1 = -alpha, g_i < 0, partial sums in (0,1] decreasing",
                    ok, f"alpha in {list(alphas)}"))
    dev = {a: v["max_row_sum_deviation"] for a, v in inv.items()}
    tele = max(v["max_row_sum_deviation_telescoped"] for v in inv.values())
    out.append(Line("C12 stencil row sums = 1 to round-off (1e-14)", max(dev.values()) <= 1e-14,
                    f"max |row sum - 1| by alpha {{{', '.join(f'{a:g}: {_g(e)}' for a, e in dev.items())}}}; "
                    f"rows match 1 + beta*g_(i+1) within {_g(tele)}"))
    for a in (0.3, 0.5, 0.7, 1.0):
        r = exact_solution_step_check(a)
        out.append(Line(f"C12 exact solution per-step error O(dt*dx), alpha={a:g}", r.passed,
                        "err/(dt*dx) " + str([_g(v) for v in r.values["interior_err_over_dt_dx"]])))
    d = standard_data()
    for a in (0.5, 1.0):
        cfg = SchemeConfig.from_ratio(a, 0.04, 20.0, 0.5, 0.9 / (1.0 + a))
        r = cross_validate(cfg, kernel_model(a), d, levels=3)
        out.append(Line(f"C12 FD vs convolution L1 decreasing with order >= 0.5, alpha={a:g}",
                        r.passed, f"L1 {[_g(v) for v in r.values['l1']]}, "
                                  f"orders {[_g(v) for v in r.values['order']]}"))
    r = limit_stencil_report()
    out.append(Line("C12 alpha=0.99 stencil within 1e-2 of FTCS", r.passed,
                    f"distance {_g(r.values['alpha_0.99.distance'])}"))
    return out


def criterion_13() -> list[Line]:
    r = alpha_continuity_study(standard_data(), np.linspace(0.0, 8.0, 161))
    dists = r.values["l1_distance"]
    ok = r.passed and dists[-1] < dists[0]
    return [Line("C13 ||w^0.99 - w^1||_1 < ||w^0.9 - w^1||_1", ok,
                 f"alpha {r.values['alpha']}: {[_g(v) for v in dists]}")]


CRITERIA: dict[int, Callable[[], list[Line]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11, 12: criterion_12, 13: criterion_13,
}


# ---------------------------------------------------------------------------
# module suites


def specfun_suite() -> list[Line]:
    out = []
    xs = np.concatenate((np.linspace(0.05, 0.95, 19), np.linspace(1.5, 160.0, 60)))
    err = max(abs(float(log_gamma(v)) - math.lgamma(v)) / max(1.0, abs(math.lgamma(v))) for v in xs)
    out.append(Line("specfun log_gamma matches lgamma within 1e-13", err <= 1e-13, f"max err {_g(err)}"))
    worst = -math.inf
    for a in (0.25, 0.5, 0.75):
        p = kernel_params(a)
        zc = crossover_point(a) ** (1 + a) / (1 + a)
        for z in np.linspace(0.0, zc, 25)[1:]:
            bound = (1.0 / p.m + 0.1) * z ** (1.0 / p.beta)
            worst = max(worst, math.log(abs(ml_eval(p, -z))) - bound)
    out.append(Line("specfun growth |E(z)| < exp((1/m + 0.1)|z|^(1/beta)) in the series domain",
                    worst < 0.0, f"max log-excess {_g(worst)}"))
    prof = phi_volterra(0.5, 1.0, 4096)
    xv = np.linspace(0.0, 1.0, 41)
    dev = max(abs(prof(v) - phi_series(0.5, v)) for v in xv)
    out.append(Line("specfun series vs Volterra on [0,1] within 1e-8", dev <= 1e-8, f"max dev {_g(dev)}"))
    for a in (0.25, 0.5, 0.75, 1.0):
        inv = profile_invariants(kernel_profile(a))
        out.append(Line(f"specfun profile table shape alpha={a:g}", all(inv.values()),
                        ", ".join(k for k, v in inv.items() if not v)))
    return out


def fracops_suite() -> list[Line]:
    out = []
    a = 0.5
    f = lambda s: np.sin(s) + s ** 2
    errs = []
    for h in (0.02, 0.01, 0.005):
        n = int(round(1.0 / h))
        g = GridFunction.sample(f, h, n)
        d = GridFunction(h, caputo_all(g, a))
        errs.append(abs(frac_integral(d, a, n) - (f(1.0) - f(0.0))))
    out.append(Line("fracops I^a D^a f -> f - f(0) under refinement",
                    all(e1 < e0 for e0, e1 in zip(errs[:-1], errs[1:])),
                    f"errors {[_g(e) for e in errs]}"))
    h = 0.005
    n = int(round(1.5 / h))
    g = GridFunction.sample(lambda s: gauss_bump(s / 1.5), h, n)
    dv = caputo_all(g, a)
    fp = np.gradient(g.values, h)
    val = float(trapezoid(dv * fp, g.x))
    out.append(Line("fracops int D^a f * f' >= 0 for a compactly supported bump", val >= -1e-10,
                    f"integral {_g(val)}"))
    errs = []
    for h in (0.01, 0.005):
        n = int(round(1.0 / h))
        g = GridFunction.sample(np.sin, h, n)
        errs.append(abs(caputo(g, 1.0, n) - math.cos(1.0)))
    out.append(Line("fracops alpha=1 is a first difference, error O(h)",
                    errs[1] < 0.6 * errs[0] and errs[0] < 0.01, f"errors {[_g(e) for e in errs]}"))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SmoothnessWarning)
        rep = scaling_check(lambda s: s ** 2 + np.sin(s), 0.5, 2.0, h=2e-3)
    out.append(Line("fracops scaling identities for D^a and (D^a)' within 1e-3",
                    rep.max_discrepancy <= 1e-3, f"discrepancy {_g(rep.max_discrepancy)}"))
    return out


def kernel_residual(a: float, h: float, t: float = 1.0, dt: float = 1e-3,
                    x_lo: float = 0.5, x_hi: float = 3.5) -> float:
    """max |dE/dt - (D^a E)_x| over [x_lo, x_hi] at time t."""
    m = kernel_model(a)
    x = np.arange(0.0, x_hi + 0.5 + h / 2, h)
    dt_e = (kernel_eval(m, x, t + dt) - kernel_eval(m, x, t - dt)) / (2 * dt)
    res = dt_e - caputo_deriv_x_all(GridFunction(h, kernel_eval(m, x, t)), a)
    sel = (x >= x_lo) & (x <= x_hi)
    return float(np.nanmax(np.abs(res[sel])))


def kernel_suite() -> list[Line]:
    out = []
    m = kernel_model(0.5)
    x = np.linspace(0.0, 20.0, 401)
    v = kernel_eval(m, x, 1.0)
    even = np.array_equal(v, kernel_eval(m, -x, 1.0))
    out.append(Line("kernel positive, even and decreasing in |x| (alpha=0.5, t=1)",
                    bool(np.all(v > 0) and even and np.all(np.diff(v) < 0)),
                    f"min {_g(v.min())}, exactly even {even}"))
    sups = [kernel_eval(m, 0.0, t) / (m.a0 * t ** (-m.gamma_exponent)) for t in (0.5, 1.0, 2.0)]
    out.append(Line("kernel sup_x E(x,t) = a0 t^(-1/(1+a))", all(abs(s - 1) <= 1e-14 for s in sups),
                    f"ratios {[_g(s) for s in sups]}"))
    q = holder_quotients(m, 1.0, np.geomspace(1e-4, 1e-2, 5))
    out.append(Line("kernel |E_x(x,1)|/x^alpha bounded as x -> 0 (empirical, no constant asserted)",
                    bool(q.max() <= 1.1 * q.min()), f"quotients {[_g(v) for v in q]}"))
    for a in (0.5, 0.75):
        errs = [kernel_residual(a, h) for h in (0.02, 0.01, 0.005)]
        need = min(1.0, 2.0 - a) - 0.2
        orders = _orders(errs)
        out.append(Line(f"kernel PDE residual alpha={a} order >= {need:.2f}", min(orders) >= need,
                        f"residuals {[_g(e) for e in errs]}, orders {[_g(o) for o in orders]}"))
    return out


def solution_residual(a: float, h: float, bc: str, t: float = 1.0, dt: float = 1e-3) -> float:
    m = kernel_model(a)
    d = standard_data(bc=bc)
    x = np.arange(0.0, 4.0 + h / 2, h)
    solve = dirichlet_solve if bc == "dirichlet" else neumann_solve
    f = solve(m, d, x, [t - dt, t, t + dt])
    res = (f.values[2] - f.values[0]) / (2 * dt) - caputo_deriv_x_all(GridFunction(h, f.values[1]), a)
    sel = (x >= 0.5) & (x <= 3.5)
    return float(np.nanmax(np.abs(res[sel])))


def solvers_suite() -> list[Line]:
    out = []
    m = kernel_model(0.5)
    dn = standard_data(bc="neumann")
    slopes = []
    for h in (0.02, 0.01):
        f = neumann_solve(m, dn, [0.0, h], [0.5, 1.0, 2.0])
        slopes.append(float(np.max(np.abs(f.values[:, 1] - f.values[:, 0]) / h)))
    out.append(Line("solvers Neumann one-sided slope at 0 is O(h)", slopes[1] < 0.6 * slopes[0],
                    f"slopes {[_g(s) for s in slopes]}"))
    x = np.linspace(0.0, 20.0, 201)
    f = neumann_solve(m, dn, x, [0.01, 0.1, 1.0, 10.0])
    out.append(Line("solvers g >= 0 gives w2 >= 0", bool(np.all(f.values >= 0.0)),
                    f"min {_g(f.values.min())}"))
    for bc in ("dirichlet", "neumann"):
        errs = [solution_residual(0.5, h, bc) for h in (0.02, 0.01, 0.005)]
        orders = _orders(errs)
        out.append(Line(f"solvers {bc} PDE residual alpha=0.5 order >= 0.80",
                        min(orders) >= 0.8,
                        f"residuals {[_g(e) for e in errs]}, orders {[_g(o) for o in orders]}"))
    r = initial_limit_check(m, standard_data(), np.linspace(0.0, 10.0, 1001))
    out.append(Line("solvers ||w1(t) - g||_2 decreases as t -> 0 to the resolution floor", r.passed,
                    f"distances {[_g(v) for v in r.values['distance']]}, floor {_g(r.values['floor'])}"))
    forcing = ForcingData.sample(lambda y, s: gauss_bump(y) * np.cos(s), 1.0, 1.0, 50, 20)
    w3 = duhamel_solve(m, forcing, "dirichlet", np.linspace(0.0, 3.0, 31), [0.5, 1.0])
    out.append(Line("solvers Duhamel term bounded by t sup|f|, zero at x=0",
                    w3.meta["bound_ok"] and float(np.max(np.abs(w3.values[:, 0]))) <= 1e-12,
                    f"max |w3| {_g(np.max(np.abs(w3.values)))}"))
    return out


def fdscheme_suite() -> list[Line]:
    out = []
    drifts = []
    for a in (0.25, 0.5, 0.75, 1.0):
        # 20 units wide: the frozen right end leaks mass through the heavy weight tail
        cfg = SchemeConfig.from_ratio(a, 0.05, 20.0, 0.5, 0.9 / (1 + a))
        f = run(cfg, GridFunction(cfg.dx, gauss_bump(cfg.x - 9.5)), [0.0, 0.5])
        masses = f.values.sum(axis=1) * cfg.dx
        drifts.append(abs(masses[-1] - masses[0]) / masses[0])
    out.append(Line("fdscheme mass drift <= 1% on [0,20] up to t=0.5, data centred",
                    max(drifts) <= 0.01, f"relative drift {[_g(d) for d in drifts]}"))
    cfg = SchemeConfig(0.5, 0.05, 0.9 / 1.5 * 0.05 ** 1.5, 200, 10000)
    growth = -math.inf
    for prof in BUILTIN_PROFILES.values():
        u0 = prof(cfg.x - 2.0)
        f = run(cfg, GridFunction(cfg.dx, u0), [k * cfg.dt for k in range(0, 10001, 100)])
        growth = max(growth, float(np.max(np.abs(f.values))) - float(np.max(np.abs(u0))))
    out.append(Line("fdscheme max|u^k| <= max|u^0| over 1e4 steps under the guard",
                    growth <= 1e-12, f"largest excess {_g(growth)}"))
    g = grunwald_weights(0.5, 3).g
    out.append(Line("fdscheme g_2 = -0.125 at alpha=0.5", g[2] == -0.125, f"g_2 = {float(g[2])!r}"))
    return out


MODULE_SUITES: dict[str, Callable[[], list[Line]]] = {
    "specfun": specfun_suite,
    "fracops": fracops_suite,
    "kernel": kernel_suite,
    "solvers": solvers_suite,
    "fdscheme": fdscheme_suite,
}


def run_criterion(number: int) -> list[Line]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ResolutionWarning)
        warnings.simplefilter("ignore", SmoothnessWarning)
        return CRITERIA[number]()


def run_all(stream: TextIO | None = None, criteria: Iterable[int] | None = None,
            suites: Iterable[str] | None = None) -> list[Line]:
    """Run the selected checks (all by default), printing each line as it completes."""
    lines: list[Line] = []

    def emit(batch):
        for ln in batch:
            lines.append(ln)
            if stream is not None:
                print(ln.render(), file=stream, flush=True)

    start = time.perf_counter()
    for k in (CRITERIA if criteria is None else criteria):
        emit(run_criterion(k))
    for name in (MODULE_SUITES if suites is None else suites):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ResolutionWarning)
            warnings.simplefilter("ignore", SmoothnessWarning)
            emit(MODULE_SUITES[name]())
    if stream is not None:
        n_pass = sum(ln.passed for ln in lines)
        print(f"summary: {n_pass}/{len(lines)} passed in {time.perf_counter() - start:.1f} s",
              file=stream, flush=True)
    return lines
