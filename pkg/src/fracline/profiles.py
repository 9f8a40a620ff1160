"""Built-in initial profiles on [0, 1].

Each profile is compactly supported in [0, 1], vanishes at both ends and
peaks at 1:

    gauss-bump  g(y) = exp(1 - 1/(1 - (2y-1)^2))               for 0 < y < 1
    tent        g(y) = 1 - |2y - 1|                            for 0 <= y <= 1
    box-smooth  g(y) = (1 - cos(4 pi y))/2   on [0, 1/4]
                       1                     on [1/4, 3/4]
                       (1 - cos(4 pi (1-y)))/2 on [3/4, 1]
"""

from __future__ import annotations

import numpy as np

__all__ = ["BUILTIN_PROFILES", "gauss_bump", "tent", "box_smooth"]


def gauss_bump(y):
    y = np.asarray(y, dtype=float)
    s = 2.0 * y - 1.0
    out = np.zeros_like(y)
    inside = np.abs(s) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
    return out


def tent(y):
    y = np.asarray(y, dtype=float)
    return np.clip(1.0 - np.abs(2.0 * y - 1.0), 0.0, None)


def box_smooth(y):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    left = (y >= 0.0) & (y < 0.25)
    mid = (y >= 0.25) & (y <= 0.75)
    right = (y > 0.75) & (y <= 1.0)
    out[left] = 0.5 * (1.0 - np.cos(4.0 * np.pi * y[left]))
    out[mid] = 1.0
    out[right] = 0.5 * (1.0 - np.cos(4.0 * np.pi * (1.0 - y[right])))
    return out


BUILTIN_PROFILES = {
    "gauss-bump": gauss_bump,
    "tent": tent,
    "box-smooth": box_smooth,
}
