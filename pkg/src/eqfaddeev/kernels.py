"""Closed-form kernels of the model and their cancellation-safe primitives.

The metric kernel is

    At(r, y) = 1 + sin^2(r y + phi(r)) / r^2,

together with its radial and y derivatives.  Near the axis every appearance
of sin(...)/r is rewritten through

    S(x) = sin(x)/x,   T(x) = (1 - S(x))/x^2,   G(x) = (S(x) - cos x)/x^2,

so that all removable 1/r powers cancel analytically (phi == N1*pi there, and
sin is pi-periodic up to sign, squared terms exactly).  The switch to the
Maclaurin series happens where the direct expressions start losing digits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["sinc_s", "sinc_t", "sinc_g", "AuxKernelPoint", "a_tilde_arrays", "sin2u_over_2r"]


def sinc_s(x):
    """sin(x)/x, exact limit 1 at 0."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, np.sin(xs) / xs)


def sinc_t(x):
    """(1 - sin(x)/x)/x^2 -> 1/6 at 0."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < 0.1
    xs = np.where(small, 1.0, x)
    ser = 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0 - x2 * x2 * x2 / 362880.0
    return np.where(small, ser, (1.0 - np.sin(xs) / xs) / (xs * xs))


def sinc_g(x):
    """(sin(x)/x - cos(x))/x^2 -> 1/3 at 0."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < 0.1
    xs = np.where(small, 1.0, x)
    ser = 1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0 - x2 * x2 * x2 / 45360.0
    return np.where(small, ser, (np.sin(xs) / xs - np.cos(xs)) / (xs * xs))


@dataclass(frozen=True)
class AuxKernelPoint:
    """Kernel value and first derivatives at one (r, y)."""

    a_tilde: float
    a_tilde_r: float
    a_tilde_y: float


def a_tilde_arrays(r, y, phi, phi_d1, n1: int):
    """Vectorized (At, At_r, At_y) for broadcastable r, y.

    phi, phi_d1 are the cutoff and its derivative at r (same shape as r).
    For r <= 1 the plateau phi == n1*pi is exact and the stable forms are
    used; beyond that the direct expressions are safe (r >= 1).
    """
    r = np.asarray(r, dtype=float)
    y = np.asarray(y, dtype=float)
    r, y, phi, phi_d1 = np.broadcast_arrays(r, y, phi, phi_d1)
    At = np.empty(r.shape)
    At_r = np.empty(r.shape)
    At_y = np.empty(r.shape)

    near = r <= 1.0
    if np.any(near):
        rn, yn = r[near], y[near]
        x = rn * yn
        s = sinc_s(x)
        At[near] = 1.0 + (yn * s) ** 2
        At_r[near] = -2.0 * rn * yn**4 * s * sinc_g(x)
        At_y[near] = 2.0 * yn * sinc_s(2.0 * x)

    far = ~near
    if np.any(far):
        rf, yf = r[far], y[far]
        u = rf * yf + phi[far]
        s2 = np.sin(u) ** 2
        At[far] = 1.0 + s2 / rf**2
        At_r[far] = -2.0 * s2 / rf**3 + np.sin(2.0 * u) * (yf + phi_d1[far]) / rf**2
        At_y[far] = np.sin(2.0 * u) / rf
    return At, At_r, At_y


def sin2u_over_2r(r, v, phi, n1: int):
    """sin(2u)/(2r) with u = r v + phi, stable at the axis (= v sinc(2rv) there)."""
    r = np.asarray(r, dtype=float)
    v = np.asarray(v, dtype=float)
    out = np.empty(np.broadcast(r, v).shape)
    r, v, phi = np.broadcast_arrays(r, v, phi)
    near = r <= 1.0
    out[near] = v[near] * sinc_s(2.0 * r[near] * v[near])
    far = ~near
    out[far] = np.sin(2.0 * (r[far] * v[far] + phi[far])) / (2.0 * r[far])
    return out
