"""Gamma function, generalized Mittag-Leffler series and the kernel profile Phi.

The profile is

    Phi(x) = E_{a, 1+1/a, 1/a}(-x**(1+a) / (1+a)),

evaluated by its power series near the origin and by the equivalent
second-kind Volterra equation

    Phi(x) = 1 - 1/((1+a) Gamma(a)) * int_0^x (x-z)**(a-1) z Phi(z) dz

further out, where the alternating series loses all its digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import ConvergenceError, DomainError
from .quadrature import singular_cell_weights
from .summation import (
    DD_EPS,
    NeumaierSum,
    dd,
    dd_add,
    dd_div,
    dd_mul,
    dd_to_float,
    two_prod,
)

__all__ = [
    "FractionalOrder",
    "as_alpha",
    "log_gamma",
    "gamma",
    "rgamma",
    "MLParams",
    "CoefficientTable",
    "ml_coefficients",
    "ml_eval",
    "kernel_params",
    "crossover_point",
    "phi_series",
    "PhiProfile",
    "phi_volterra",
    "build_profile",
    "kernel_profile",
    "phi",
    "profile_invariants",
]

DOUBLE_EPS = 2.0 ** -52

# cancellation tolerated by ml_eval, expressed for double precision terms
CANCELLATION_LIMIT = 1e12
# largest series term allowed below the crossover (absolute error ~ eps * budget)
SERIES_TERM_BUDGET = 1e4
CROSSOVER_Z = 25.0


# ---------------------------------------------------------------------------
# fractional order


@dataclass(frozen=True)
class FractionalOrder:
    """Exponent alpha in (0, 1]."""

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a <= 1.0) or math.isnan(a):
            raise DomainError(f"fractional order must lie in (0, 1], got {self.alpha!r}")
        object.__setattr__(self, "alpha", a)

    def __float__(self):
        return self.alpha

    @property
    def is_classical(self) -> bool:
        return self.alpha == 1.0

    @property
    def similarity_exponent(self) -> float:
        """1/(1+alpha): the time exponent of the kernel width."""
        return 1.0 / (1.0 + self.alpha)


def as_alpha(alpha) -> float:
    """Validate an order given as float or FractionalOrder; return the float."""
    if isinstance(alpha, FractionalOrder):
        return alpha.alpha
    return FractionalOrder(alpha).alpha


# ---------------------------------------------------------------------------
# gamma function

LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061

# zeta(2) .. zeta(26) for the Taylor branch of ln Gamma(1+e)
_ZETA = (
    1.6449340668482264365, 1.2020569031595942854, 1.0823232337111381915,
    1.0369277551433699263, 1.0173430619844491397, 1.0083492773819228268,
    1.0040773561979443394, 1.0020083928260822144, 1.0009945751278180853,
    1.0004941886041194646, 1.0002460865533080483, 1.0001227133475784891,
    1.0000612481350587048, 1.0000305882363070205, 1.0000152822594086519,
    1.0000076371976378998, 1.0000038172932649998, 1.0000019082127165539,
    1.0000009539620338728, 1.0000004769329867878, 1.0000002384505027277,
    1.0000001192199259653, 1.0000000596081890513, 1.0000000298035035147,
    1.0000000149015548284,
)
_TAYLOR_RADIUS = 0.2


def _lanczos(x):
    y = x - 1.0
    acc = np.full_like(y, LANCZOS_COEFFS[0])
    for i, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        acc += c / (y + i)
    t = y + LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (y + 0.5) * np.log(t) - t + np.log(acc)


def _lgamma1p_taylor(e):
    # ln Gamma(1+e) = -gamma e + sum_k (-1)^k zeta(k) e^k / k,  |e| <= 0.2
    acc = np.zeros_like(e)
    for k in range(len(_ZETA) + 1, 1, -1):
        acc = acc * e + (-1.0) ** k * _ZETA[k - 2] / k
    return e * (-_EULER_GAMMA + e * acc)


def log_gamma(x):
    """Natural log of Gamma(x) for x > 0.

    Lanczos approximation (g=7, 9 terms), with a zeta-series branch near the
    zeros at x=1 and x=2 so the result stays relatively accurate there.
    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0.0)):
        raise DomainError("log_gamma is defined here for x > 0 only")
    out = np.empty_like(arr)
    near1 = np.abs(arr - 1.0) < _TAYLOR_RADIUS
    near2 = np.abs(arr - 2.0) < _TAYLOR_RADIUS
    tiny = (arr < _TAYLOR_RADIUS)
    small = (arr < 1.0 - _TAYLOR_RADIUS) & ~tiny
    rest = ~(near1 | near2 | tiny | small)

    out[near1] = _lgamma1p_taylor(arr[near1] - 1.0)
    e2 = arr[near2] - 2.0
    out[near2] = np.log1p(e2) + _lgamma1p_taylor(e2)
    xt = arr[tiny]
    out[tiny] = _lgamma1p_taylor(xt) - np.log(xt)
    xs = arr[small]
    out[small] = _lanczos(xs + 1.0) - np.log(xs)
    out[rest] = _lanczos(arr[rest])
    if out.ndim == 0:
        return float(out)
    return out


def gamma(x):
    """Gamma(x) for x > 0."""
    return np.exp(log_gamma(x)) if np.ndim(x) else math.exp(log_gamma(x))


def rgamma(x: float) -> float:
    """1/Gamma(x) for any real x; zero at the poles 0, -1, -2, ..."""
    x = float(x)
    if x > 0.0:
        return math.exp(-log_gamma(x))
    if x == math.floor(x):
        return 0.0
    la, s = _log_abs_gamma(x)
    return s * math.exp(-la)


def _log_abs_gamma(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign Gamma(x)) for real x off the poles."""
    if x > 0.0:
        return log_gamma(x), 1.0
    s = math.sin(math.pi * x)
    if s == 0.0:
        raise DomainError(f"Gamma has a pole at {x}")
    return (math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x),
            math.copysign(1.0, s))


# ---------------------------------------------------------------------------
# generalized Mittag-Leffler function


def _is_positive_integer(v: float) -> bool:
    r = round(v)
    return r >= 1 and abs(v - r) <= 1e-12 * max(1.0, abs(v))


@dataclass(frozen=True)
class MLParams:
    """Parameters (beta, m, l) of E_{beta,m,l}."""

    beta: float
    m: float
    l: float

    def __post_init__(self):
        b, m, l = float(self.beta), float(self.m), float(self.l)
        if not (b > 0.0 and m > 0.0) or not math.isfinite(l):
            raise DomainError(f"need beta > 0, m > 0 and finite l, got {(b, m, l)}")
        j = 0
        while j * m + l < 0.0:
            if _is_positive_integer(-b * (j * m + l)):
                raise DomainError(
                    f"-beta*(j*m + l) = {-b * (j * m + l):g} is a positive integer (j={j})")
            j += 1
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "l", l)

    @property
    def integer_beta(self) -> bool:
        return self.beta.is_integer() and self.beta <= 16


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients c_0..c_N of the series, with their logs and signs."""

    params: MLParams
    coeffs: np.ndarray
    log_abs: np.ndarray = field(repr=False)
    signs: np.ndarray = field(repr=False)
    computed_in_log_space: bool = True

    def __len__(self):
        return len(self.coeffs)


def _log_ratios(params: MLParams, start: int, stop: int):
    """ln|c_{i+1}/c_i| and sign for i in [start, stop)."""
    i = np.arange(start, stop, dtype=float)
    a = params.beta * (i * params.m + params.l) + 1.0
    b = a + params.beta
    if np.all(a > 0.0):
        return log_gamma(a) - log_gamma(b), np.ones_like(a)
    logs = np.empty_like(a)
    signs = np.empty_like(a)
    for k, (ak, bk) in enumerate(zip(a, b)):
        la, sa = _log_abs_gamma(float(ak))
        if bk <= 0.0 and float(bk).is_integer():
            logs[k], signs[k] = -np.inf, 0.0
            continue
        lb, sb = _log_abs_gamma(float(bk))
        logs[k], signs[k] = la - lb, sa * sb
    return logs, signs


def ml_coefficients(params: MLParams, count: int) -> CoefficientTable:
    """Return c_0..c_count of E_{beta,m,l}.

    Each Gamma ratio is formed as a difference of log-gammas and the products
    are accumulated as sums of logs, so no intermediate Gamma value overflows.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    logs, signs = _log_ratios(params, 0, count)
    log_abs = np.concatenate(([0.0], np.cumsum(logs)))
    sgn = np.concatenate(([1.0], np.cumprod(signs)))
    coeffs = sgn * np.exp(log_abs)
    return CoefficientTable(params, coeffs, log_abs, sgn)


def _ml_eval_dd(params: MLParams, z: float, tol: float, max_terms: int):
    beta = int(params.beta)
    zd = dd(z)
    term = dd(1.0)
    total = dd(1.0)
    big = 1.0
    prev = 1.0
    for i in range(max_terms):
        p = two_prod(float(i), params.m)
        a = dd_add(dd_mul(dd_add(p, dd(params.l)), dd(float(beta))), dd(1.0))
        den = a
        for j in range(1, beta):
            den = dd_mul(den, dd_add(a, dd(float(j))))
        term = dd_div(dd_mul(term, zd), den)
        mag = abs(term[0])
        total = dd_add(total, term)
        big = max(big, mag)
        if mag == 0.0:
            break
        rho = mag / prev if prev > 0.0 else math.inf
        prev = mag
        if a[0] > 0.0 and rho < 1.0 and mag * rho / (1.0 - rho) <= tol * abs(total[0]):
            break
    else:
        raise ConvergenceError(f"series did not converge in {max_terms} terms")
    return dd_to_float(total), big, DD_EPS


def _ml_eval_log(params: MLParams, z: float, tol: float, max_terms: int):
    # each term is exp(log_c + n log|z|): its relative error grows with the
    # size of the exponent, so the guard magnitude weights terms by it
    logz = math.log(abs(z))
    zsign = -1.0 if z < 0.0 else 1.0
    acc = NeumaierSum(1.0)
    terms = [1.0]
    log_c, sign_c = 0.0, 1.0
    prev = 1.0
    big = 1.0
    block = 256
    n = 0
    while n < max_terms:
        logs, signs = _log_ratios(params, n, n + block)
        for lr, sr in zip(logs, signs):
            n += 1
            log_c += lr
            sign_c *= sr
            if sign_c == 0.0:
                return math.fsum(terms), big, DOUBLE_EPS
            expo = log_c + n * logz
            mag = math.exp(expo)
            t = sign_c * (zsign ** (n & 1)) * mag
            terms.append(t)
            acc.add(t)
            big = max(big, mag * (1.0 + abs(log_c) + n * abs(logz)))
            rho = mag / prev if prev > 0.0 else math.inf
            prev = mag
            a_n = params.beta * (n * params.m + params.l) + 1.0
            if a_n > 0.0 and rho < 1.0 and mag * rho / (1.0 - rho) <= tol * abs(acc.value):
                return math.fsum(terms), big, DOUBLE_EPS
            if mag == 0.0:
                return math.fsum(terms), big, DOUBLE_EPS
    raise ConvergenceError(f"series did not converge in {max_terms} terms")


def ml_eval(params: MLParams, z: float, tol: float = 1e-14, max_terms: int = 20000) -> float:
    """Sum the series E_{beta,m,l}(z) = sum_n c_n z**n for real z.

    When beta is an integer the Gamma ratios are rising factorials and the
    terms are carried in double-double arithmetic; otherwise each term is
    built from log-space coefficients in double precision. Either way the
    sum is compensated, and a ConvergenceError is raised if the largest term
    exceeds the result by more than the precision budget allows. In the
    log-space branch a term counts with its exponent-error factor
    1 + |log c_n| + n |log z|.
    """
    if not tol >= 1e-14:
        raise DomainError("tol must be >= 1e-14")
    z = float(z)
    if z == 0.0:
        return 1.0
    if params.integer_beta:
        total, big, eps = _ml_eval_dd(params, z, tol, max_terms)
    else:
        total, big, eps = _ml_eval_log(params, z, tol, max_terms)
    limit = CANCELLATION_LIMIT * DOUBLE_EPS / eps
    if total == 0.0 or big / abs(total) > limit:
        raise ConvergenceError(
            f"cancellation too severe at z={z:g}: term scale {big:.3e}, sum {total:.3e}")
    return total


# ---------------------------------------------------------------------------
# the kernel profile: series branch


@lru_cache(maxsize=None)
def kernel_params(alpha: float) -> MLParams:
    a = as_alpha(alpha)
    return MLParams(a, 1.0 + 1.0 / a, 1.0 / a)


def _to_z(alpha: float, x):
    return -np.power(x, 1.0 + alpha) / (1.0 + alpha)


@lru_cache(maxsize=None)
def _series_table(alpha: float) -> tuple[float, CoefficientTable]:
    """Crossover |z| and enough coefficients to sum the series up to it."""
    params = kernel_params(alpha)
    count = 64
    while True:
        table = ml_coefficients(params, count)
        n = np.arange(len(table))

        def max_log_term(logz):
            return float(np.max(table.log_abs + n * logz))

        lo, hi = math.log(1e-3), math.log(CROSSOVER_Z)
        target = math.log(SERIES_TERM_BUDGET)
        if max_log_term(hi) <= target:
            logz_c = hi
        else:
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if max_log_term(mid) > target:
                    hi = mid
                else:
                    lo = mid
            logz_c = lo
        # enough terms: the last few must be negligible at |z_c|
        tail = table.log_abs[-8:] + n[-8:] * logz_c
        if np.all(tail < math.log(1e-18)) and np.argmax(table.log_abs + n * logz_c) < count - 8:
            return math.exp(logz_c), table
        count *= 2
        if count > 200000:
            raise ConvergenceError(f"series coefficients do not decay for alpha={alpha}")


def crossover_point(alpha) -> float:
    """Abscissa where phi() switches from the series to the Volterra profile.

    It is the point where x**(1+a)/(1+a) reaches 25 or where the largest
    series term reaches SERIES_TERM_BUDGET, whichever comes first.
    """
    a = as_alpha(alpha)
    zc, _ = _series_table(a)
    return ((1.0 + a) * zc) ** (1.0 / (1.0 + a))


def phi_series(alpha, x: float, tol: float = 1e-14) -> float:
    """Phi(x) by direct summation of the Mittag-Leffler series."""
    a = as_alpha(alpha)
    if x < 0.0:
        raise DomainError("Phi is evaluated on x >= 0")
    return ml_eval(kernel_params(a), float(_to_z(a, float(x))), tol)


def _phi_series_array(alpha: float, x: np.ndarray) -> np.ndarray:
    # Horner on the cached table; used for bulk evaluation below the crossover
    _, table = _series_table(alpha)
    z = _to_z(alpha, x)
    acc = np.zeros_like(z)
    for c in table.coeffs[::-1]:
        acc = acc * z + c
    return acc


# ---------------------------------------------------------------------------
# the kernel profile: Volterra branch

def _volterra_march(alpha: float, x: np.ndarray, values: np.ndarray, start: int) -> None:
    """Fill values[start:] by implicit product-trapezoidal steps.

    values[:start] are treated as known (values[0] must be Phi(0) = 1).
    """
    n_tot = len(x)
    if alpha == 1.0:
        # constant kernel: difference consecutive equations, no cancellation
        for n in range(start, n_tot):
            h = x[n] - x[n - 1]
            q = 0.25 * h
            den = 1.0 + q * x[n]
            values[n] = (values[n - 1] - q * x[n - 1] * values[n - 1]) / den
            if values[n] <= 0.0:
                values[n:] = 0.0
                return
        return
    c = 1.0 / ((1.0 + alpha) * gamma(alpha))
    f = x * values
    for n in range(start, n_tot):
        xn = x[n]
        wl, wr = singular_cell_weights(alpha, xn - x[:n], xn - x[1:n + 1])
        s = np.dot(wl, f[:n]) + np.dot(wr[:-1], f[1:n])
        den = 1.0 + c * wr[-1] * xn
        if not den > 0.0:
            raise ArithmeticError(f"implicit Volterra step lost positivity at x={xn}")
        values[n] = (1.0 - c * s) / den
        f[n] = xn * values[n]


@dataclass(frozen=True)
class PhiProfile:
    """Tabulated Phi on an increasing grid starting at 0.

    Nodes up to ``crossover_point`` carry series values (none for a pure
    Volterra profile, where crossover_point is 0); beyond it the values come
    from the Volterra continuation. Between nodes the profile is interpolated
    by a monotone cubic in (log x, log Phi).
    """

    alpha: float
    grid: np.ndarray
    values: np.ndarray
    crossover_point: float = 0.0

    @cached_property
    def _interp(self):
        pos = self.values > 0.0
        pos[0] = False
        xs = self.grid[pos]
        return PchipInterpolator(np.log(xs), np.log(self.values[pos]), extrapolate=False), xs[0], xs[-1]

    @cached_property
    def tail_exponent(self):
        """Empirical decay exponent d log Phi / d log x at the end of the table."""
        if self.values[-1] <= 0.0 or self.alpha == 1.0:
            return None
        x0, x1 = self.grid[-2], self.grid[-1]
        return float((math.log(self.values[-1]) - math.log(self.values[-2]))
                     / (math.log(x1) - math.log(x0)))

    @property
    def x_end(self) -> float:
        return float(self.grid[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        interp, lo, hi = self._interp
        out = np.zeros_like(x)
        inside = (x >= lo) & (x <= hi)
        out[inside] = np.exp(interp(np.log(x[inside])))
        below = x < lo
        if np.any(below):
            out[below] = np.interp(x[below], self.grid, self.values)
        beyond = x > hi
        if np.any(beyond) and self.tail_exponent is not None:
            out[beyond] = self.values[-1] * np.power(x[beyond] / hi, self.tail_exponent)
        return out if out.ndim else float(out)


def phi_volterra(alpha, x_max: float, n_nodes: int) -> PhiProfile:
    """Solve the Volterra form of the profile equation on a uniform grid.

    Uses n_nodes + 1 points on [0, x_max]; the weakly singular factor is
    integrated exactly against the piecewise-linear interpolant of z*Phi(z)
    and each new node is solved implicitly.
    """
    a = as_alpha(alpha)
    if n_nodes < 16:
        raise DomainError("n_nodes must be >= 16")
    if not x_max > 0.0:
        raise DomainError("x_max must be positive")
    x = np.linspace(0.0, x_max, n_nodes + 1)
    values = np.empty_like(x)
    values[0] = 1.0
    _volterra_march(a, x, values, 1)
    return PhiProfile(a, x, values, 0.0)


def _graded_grid(xc: float, h0: float, growth: float, x_end: float, sub: int = 1) -> np.ndarray:
    """Uniform nodes on [0, xc], then x = xc + (h/q) expm1(q k) beyond.

    ``sub`` subdivides the parameter step, so the grid for sub=2 contains
    every node of the grid for sub=1.
    """
    n0 = max(1, int(math.ceil(xc / h0)))
    h = xc / n0
    inner = np.linspace(0.0, xc, sub * n0 + 1)
    if growth > 0.0:
        k_end = math.ceil(math.log1p(growth * (x_end - xc) / h) / growth)
        k = np.arange(1, sub * k_end + 1) / sub
        outer = xc + (h / growth) * np.expm1(growth * k)
    else:
        k_end = math.ceil((x_end - xc) / h)
        outer = xc + h * np.arange(1, sub * k_end + 1) / sub
    return np.concatenate((inner, outer))


def _march_on(a: float, x: np.ndarray, xc: float) -> np.ndarray:
    k0 = int(np.searchsorted(x, xc, side="right"))
    values = np.empty_like(x)
    values[:k0] = _phi_series_array(a, x[:k0])
    values[0] = 1.0
    _volterra_march(a, x, values, k0)
    return values


def build_profile(alpha, h0: float = 2e-3, growth: float = 4e-3,
                  x_end: float | None = None, extrapolate: bool = True) -> PhiProfile:
    """Series values up to the crossover, Volterra continuation beyond.

    The grid is uniform (step ~h0) below the crossover and grows
    geometrically (relative step ``growth``) beyond it. For alpha = 1 the
    step stays uniform and the table stops where Phi underflows. With
    ``extrapolate`` the march is repeated on the nested half-step grid and
    the two results are combined by one Richardson step (the product
    trapezoidal rule has an h**2 leading error).
    """
    a = as_alpha(alpha)
    xc = crossover_point(a)
    if a == 1.0:
        x_end = x_end or 60.0
        growth = 0.0
    else:
        x_end = x_end or 1e6
    x = _graded_grid(xc, h0, growth, x_end)
    values = _march_on(a, x, xc)
    if extrapolate:
        fine = _march_on(a, _graded_grid(xc, h0, growth, x_end, sub=2), xc)[::2]
        rich = (4.0 * fine - values) / 3.0
        # keep the plain fine values where extrapolation is meaningless (underflow)
        values = np.where((values > 1e-290) & (rich > 0.0), rich, fine)
    if a == 1.0:
        keep = values > 1e-300
        x, values = x[keep], values[keep]
    return PhiProfile(a, x, values, xc)


@lru_cache(maxsize=None)
def kernel_profile(alpha) -> PhiProfile:
    """Reference-resolution profile, cached per alpha."""
    return build_profile(as_alpha(alpha))


def phi(alpha, x):
    """Phi(x) on [0, inf): series below the crossover, profile above it."""
    a = as_alpha(alpha)
    prof = kernel_profile(a)
    xc = prof.crossover_point
    if np.ndim(x) == 0:
        x = float(x)
        if not x >= 0.0:
            raise DomainError("Phi is evaluated on x >= 0")
        if x <= xc:
            return phi_series(a, x)
        return float(prof(x))
    x = np.asarray(x, dtype=float)
    if np.any(~(x >= 0.0)):
        raise DomainError("Phi is evaluated on x >= 0")
    out = np.empty_like(x)
    low = x <= xc
    out[low] = _phi_series_array(a, x[low])
    out[~low] = prof(x[~low])
    return out


def profile_invariants(profile: PhiProfile) -> dict[str, bool]:
    """Check the proven shape properties on the tabulated nodes."""
    v, x = profile.values, profile.grid
    return {
        "starts_at_one": bool(v[0] == 1.0),
        "in_unit_interval": bool(np.all((v > 0.0) & (v <= 1.0))),
        "strictly_decreasing": bool(np.all(np.diff(v) < 0.0)),
        "x_phi_at_most_2": bool(np.all(x * v <= 2.0)),
    }
