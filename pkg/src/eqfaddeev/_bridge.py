"""Smooth step ("bridge") used by every cutoff in the model.

b(x) = s(x) / (s(x) + s(1-x)) with s(x) = exp(-1/x) for x > 0, else 0.
Exactly 0 for x <= 0 and exactly 1 for x >= 1 (in float64 the plateaus are
reached already a little inside the interval once exp underflows, which is
what makes the tabulated plateau conditions hold to the last bit).

First and second derivatives in closed form:
    b'  = s0 s1 g / D^2,                 g = 1/x^2 + 1/(1-x)^2
    b'' = (s0 s1 / D^2) (h g + g' - 2 g D'/D)
with D = s0 + s1, h = 1/x^2 - 1/(1-x)^2, D' = s0/x^2 - s1/(1-x)^2.
"""

from __future__ import annotations

import numpy as np

__all__ = ["bridge", "bridge_d1", "bridge_d2"]

# exp(-1/x) underflows for x below ~1/745; avoid useless exp warnings there
_XMIN = 1.0 / 700.0


def _s_pair(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s0 = np.zeros_like(x)
    s1 = np.zeros_like(x)
    m0 = x > _XMIN
    m1 = (1.0 - x) > _XMIN
    s0[m0] = np.exp(-1.0 / x[m0])
    s1[m1] = np.exp(-1.0 / (1.0 - x[m1]))
    return s0, s1


def bridge(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.where(x >= 1.0, 1.0, 0.0)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        s0, s1 = _s_pair(x[mid])
        out[mid] = s0 / (s0 + s1)
    return out[0] if scalar else out


def bridge_d1(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        s0, s1 = _s_pair(xm)
        D = s0 + s1
        g = 1.0 / xm**2 + 1.0 / (1.0 - xm) ** 2
        out[mid] = s0 * s1 * g / D**2
    return out[0] if scalar else out


def bridge_d2(x):
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    out = np.zeros_like(x)
    mid = (x > 0.0) & (x < 1.0)
    if np.any(mid):
        xm = x[mid]
        s0, s1 = _s_pair(xm)
        D = s0 + s1
        ix2 = 1.0 / xm**2
        iy2 = 1.0 / (1.0 - xm) ** 2
        g = ix2 + iy2
        h = ix2 - iy2
        gp = -2.0 / xm**3 + 2.0 / (1.0 - xm) ** 3
        Dp = s0 * ix2 - s1 * iy2
        out[mid] = (s0 * s1 / D**2) * (h * g + gp - 2.0 * g * Dp / D)
    return out[0] if scalar else out
