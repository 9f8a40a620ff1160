"""The self-similar fundamental solution

    E(x, t) = a0 * t**(-g) * Phi(|x| * t**(-g)),   g = 1/(1+alpha),  t > 0,

extended by zero for t <= 0, with a0 chosen so that E(., t) has mass 1/2
on the half-line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import aitken_limit, panel_integrate
from .specfun import PhiProfile, _phi_series_array, as_alpha, kernel_profile, phi

__all__ = [
    "KernelModel",
    "normalization_a0",
    "profile_integral",
    "kernel_model",
    "kernel_eval",
    "mass",
    "self_similarity_residual",
    "holder_quotients",
    "DEFAULT_SAMPLES",
]

MAX_DOUBLINGS = 20
DEFAULT_SAMPLES = tuple((x, t) for x in (0.0, 0.25, 0.5, 1.0, 2.0, 5.0) for t in (0.5, 1.0, 2.0))


def _doubling_limit(partial, r0: float, tol: float, what: str) -> tuple[float, float]:
    """Extrapolate I(R) over R = r0 * 2**k until successive estimates agree.

    ``partial(edges)`` must return the running integral at each edge.
    Convergence is judged on the extrapolated sequence, relative to the
    estimate. Raises ConvergenceError after MAX_DOUBLINGS doublings.
    """
    radii = r0 * 2.0 ** np.arange(MAX_DOUBLINGS + 1)
    running = partial(radii)
    prev = None
    for k in range(2, len(radii)):
        est, _ = aitken_limit(running[:k + 1])
        if prev is not None and abs(est - prev) <= tol * abs(est):
            return est, abs(est - prev)
        prev = est
    raise ConvergenceError(f"{what}: tail did not converge after {MAX_DOUBLINGS} doublings")


def _segment_edges(radii: np.ndarray, lo: float, per_octave: int) -> list[np.ndarray]:
    # geometric panels on [lo, r0], then per_octave panels on each [R, 2R]
    first = np.concatenate(([0.0], np.geomspace(lo, radii[0], 8 * per_octave)))
    segs = [first]
    for r_a, r_b in zip(radii[:-1], radii[1:]):
        segs.append(np.geomspace(r_a, r_b, per_octave + 1))
    return segs


def _running_integral(f, radii: np.ndarray, lo: float, per_octave: int, order: int,
                      breaks: np.ndarray | None = None) -> np.ndarray:
    out = []
    total = 0.0
    for i, seg in enumerate(_segment_edges(radii, lo, per_octave)):
        if breaks is not None:
            inside = breaks[(breaks > seg[0]) & (breaks < seg[-1])]
            seg = np.union1d(seg, inside)
        total += panel_integrate(f, seg, order)
        out.append(total)
    return np.asarray(out)


def profile_integral(alpha, tol: float = 1e-10, profile: PhiProfile | None = None) -> float:
    """int_0^inf Phi(x) dx.

    Gauss-Legendre panels up to R (aligned with the profile nodes where the
    profile is tabulated, so the interpolant is integrated cell by cell),
    with R doubled and the partial integrals extrapolated to R = inf.
    """
    a = as_alpha(alpha)
    prof = profile if profile is not None else kernel_profile(a)
    if a == 1.0:
        r0 = 4.0
    else:
        r0 = 8.0

    def f(x):
        if profile is None:
            return phi(a, x)
        low = x <= prof.crossover_point
        out = prof(x)
        out[low] = _phi_series_array(a, x[low])
        return out

    def partial(radii):
        return _running_integral(f, radii, 1e-6, 32, 8, breaks=prof.grid)

    est, _ = _doubling_limit(partial, r0, tol, "profile integral")
    return est


def normalization_a0(alpha, tol: float = 1e-10) -> float:
    """a0 = 1 / (2 int_0^inf Phi)."""
    if not tol >= 1e-10:
        raise DomainError("tol must be >= 1e-10")
    return 0.5 / profile_integral(alpha, tol)


@dataclass(frozen=True)
class KernelModel:
    """alpha, the normalization a0 and the tabulated profile."""

    alpha: float
    a0: float
    profile: PhiProfile
    a0_tolerance: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_alpha(self.alpha))
        if not (self.a0 > 0.0 and math.isfinite(self.a0)):
            raise DomainError("a0 must be positive and finite")

    @property
    def gamma_exponent(self) -> float:
        return 1.0 / (1.0 + self.alpha)

    def __call__(self, x, t):
        return kernel_eval(self, x, t)


@lru_cache(maxsize=None)
def kernel_model(alpha, tol: float = 1e-10) -> KernelModel:
    """Cached KernelModel for this alpha."""
    a = as_alpha(alpha)
    return KernelModel(a, normalization_a0(a, tol), kernel_profile(a), tol)


def kernel_eval(model: KernelModel, x, t):
    """E(x, t); zero for t <= 0, even in x. Accepts broadcastable arrays."""
    g = model.gamma_exponent
    scalar = np.ndim(x) == 0 and np.ndim(t) == 0
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    out = np.zeros(x.shape)
    live = t > 0.0
    if np.any(live):
        # t**(-g) through logs so extreme t neither overflows nor underflows early
        scale = np.exp(-g * np.log(t[live]))
        out[live] = model.a0 * scale * phi(model.alpha, np.abs(x[live]) * scale)
    return float(out) if scalar else out


def mass(model: KernelModel, t: float, resolution: int = 64) -> float:
    """int_0^inf E(x, t) dx by panels in x, with a doubling-R tail.

    The panel layout depends only on t**(1/(1+alpha)) and ``resolution``
    (panels per octave), not on the profile grid.
    """
    if not t > 0.0:
        raise DomainError("t must be positive")
    width = t ** model.gamma_exponent

    def partial(radii):
        return _running_integral(lambda x: kernel_eval(model, x, t), radii,
                                 1e-8 * width, resolution, 10)

    est, _ = _doubling_limit(partial, 8.0 * width, 1e-10, "mass")
    return est


def self_similarity_residual(model: KernelModel, lam: float,
                             samples: Iterable[tuple[float, float]] = DEFAULT_SAMPLES) -> float:
    """max |lam**g E(lam**g x, lam t) - E(x, t)| over (x, t) samples."""
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    s = lam ** model.gamma_exponent
    worst = 0.0
    for x, t in samples:
        worst = max(worst, abs(s * kernel_eval(model, s * x, lam * t) - kernel_eval(model, x, t)))
    return worst


def holder_quotients(model: KernelModel, t: float = 1.0, x=None, exponent: float | None = None):
    """|E_x(x, t) - E_x(0, t)| / x**exponent at small x (exponent defaults to alpha).

    E_x(0, t) = 0 by evenness; E_x is a central difference with a step
    proportional to x. A bounded sequence as x -> 0 is the empirical
    signature of a Hoelder-continuous derivative with that exponent; no
    constant is asserted.
    """
    if x is None:
        x = np.geomspace(1e-4, 1e-1, 7)
    x = np.asarray(x, dtype=float)
    e = model.alpha if exponent is None else exponent
    step = 1e-3 * x
    dx = (kernel_eval(model, x + step, t) - kernel_eval(model, x - step, t)) / (2.0 * step)
    return np.abs(dx) / x ** e
