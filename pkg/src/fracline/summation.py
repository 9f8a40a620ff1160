"""Error-free transformations, double-double arithmetic and compensated sums.

Double-double values are plain ``(hi, lo)`` tuples with ``|lo| <= ulp(hi)/2``.
Only the handful of operations the series evaluator needs are provided.
"""

from __future__ import annotations

import math

_SPLITTER = 134217729.0  # 2**27 + 1

DD_EPS = 2.0 ** -104


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Dekker product: ``a*b == p + e`` exactly (barring over/underflow)."""
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd(x: float) -> tuple[float, float]:
    return (float(x), 0.0)


def dd_add(x, y):
    s, e = two_sum(x[0], y[0])
    t, f = two_sum(x[1], y[1])
    e += t
    s, e = quick_two_sum(s, e)
    e += f
    return quick_two_sum(s, e)


def dd_neg(x):
    return (-x[0], -x[1])


def dd_mul(x, y):
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def dd_div(x, y):
    q1 = x[0] / y[0]
    r = dd_add(x, dd_neg(dd_mul(y, (q1, 0.0))))
    q2 = r[0] / y[0]
    r = dd_add(r, dd_neg(dd_mul(y, (q2, 0.0))))
    q3 = r[0] / y[0]
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add((q1, q2), (q3, 0.0))


def dd_to_float(x) -> float:
    return x[0] + x[1]


class NeumaierSum:
    """Running compensated sum (Kahan-Babuska-Neumaier)."""

    __slots__ = ("s", "c")

    def __init__(self, start: float = 0.0):
        self.s = float(start)
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def fsum(values) -> float:
    """Exactly rounded sum (thin wrapper so callers need not import math)."""
    return math.fsum(values)
