"""Quadrature building blocks: Gauss-Legendre panels, exact weights for
power-law singular kernels, and limit extrapolation of slowly converging
sequences."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "gauss_legendre",
    "panel_integrate",
    "pow_diff",
    "singular_cell_weights",
    "aitken_limit",
]

_SERIES_SWITCH = 0.1
_SERIES_ORDER = 16


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def panel_integrate(f: Callable[[np.ndarray], np.ndarray], edges: np.ndarray,
                    order: int = 8, cumulative: bool = False):
    """Integrate a vectorized f over consecutive panels given by ``edges``.

    Returns the total, or the running integral at every edge when
    ``cumulative`` is set (first entry 0).
    """
    edges = np.asarray(edges, dtype=float)
    u, w = gauss_legendre(order)
    width = np.diff(edges)
    nodes = edges[:-1, None] + width[:, None] * u[None, :]
    vals = f(nodes.ravel()).reshape(nodes.shape)
    per_panel = width * (vals @ w)
    if cumulative:
        return np.concatenate(([0.0], np.cumsum(per_panel)))
    return math.fsum(per_panel)


def pow_diff(A, B, p):
    """A**p - B**p for 0 <= B <= A, accurate when A - B << B."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        far = np.power(B, p) * np.expm1(p * np.log1p((A - B) / B))
    return np.where(B > 0.0, far, np.power(A, p))


def singular_cell_weights(a: float, A, B):
    """Weights for int over a cell of d**(a-1) * f, f linear on the cell.

    d is the distance to the singular point; the cell spans distances
    [B, A] with A > B >= 0. Returns (w_far, w_near): the weights of f at
    the node at distance A and at distance B. Requires a > 0.

    Far cells (h/B < 0.1) use a binomial expansion, which avoids the
    cancellation between the two closed-form pieces.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    h = A - B
    pa = pow_diff(A, B, a)
    pa1 = pow_diff(A, B, a + 1.0)
    w_far = (pa1 / (a + 1.0) - B * pa / a) / h
    w_near = (A * pa / a - pa1 / (a + 1.0)) / h

    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(B > 0.0, h / B, np.inf)
    far = r < _SERIES_SWITCH
    if np.any(far):
        rf = r[far]
        s_far = np.zeros_like(rf)
        s_near = np.zeros_like(rf)
        coef = [1.0]
        for k in range(1, _SERIES_ORDER + 1):
            coef.append(coef[-1] * (a - k) / k)
        for k in range(_SERIES_ORDER, -1, -1):
            s_far = s_far * rf + coef[k] / (k + 2.0)
            s_near = s_near * rf + coef[k] / ((k + 1.0) * (k + 2.0))
        scale = h[far] * np.power(B[far], a - 1.0)
        w_far[far] = scale * s_far
        w_near[far] = scale * s_near
    return w_far, w_near


def aitken_limit(seq: Sequence[float]) -> tuple[float, float]:
    """Aitken delta-squared extrapolation from the last three entries.

    Fits a geometric error model s_k = L + c r**k to the last three partial
    results, which suits integrals over [0, R] of an algebraically decaying
    function as R doubles. Returns (estimate, |change from the last entry|).
    Falls back to the last entry when the increments do not shrink.
    """
    s = [float(v) for v in seq]
    if len(s) < 3:
        return s[-1], math.inf if len(s) < 2 else abs(s[-1] - s[-2])
    s0, s1, s2 = s[-3:]
    d1, d2 = s1 - s0, s2 - s1
    den = d2 - d1
    if den == 0.0 or abs(d2) >= abs(d1):
        return s2, abs(d2)
    est = s2 - d2 * d2 / den
    return est, abs(est - s2)
