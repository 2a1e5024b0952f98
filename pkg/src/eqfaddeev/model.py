"""Closed-form model expressions: the field equation's nonlinearity, the
u <-> v transform pair, the auxiliary integral field Phi with its wave-
equation right-hand side and time derivatives, gradient recovery, energy,
and topological charge.

The v-equation right-hand side is

    Box_{4+1} v = (1/r) Lap2 phi + (phi_>1/r) N(r, u, grad u) + (phi_>1/r^2) v
                  + phi_<1 * [ (1/r) N(r, rv, grad(rv)) + v/r^2 ]

with N the quasilinear nonlinearity of the angle equation.  The phi_<1
bracket is evaluated in the equivalent cancellation-free form

    [4 v^3 T(2rv) - v^5 S(rv) G(rv) - v S(2rv)(v_t^2 - v_r^2)
     - 2 r v^4 v_r S(rv) G(rv)] / (1 + v^2 S(rv)^2)

(S, T, G from kernels), which absorbs every inverse power of r analytically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutoffs import CutoffProfile
from .fields import UState, VState, PhiState
from .grid import (RadialGrid, edge_value, origin_value, radial_derivative,
                   radial_integral)
from .kernels import (AuxKernelPoint, a_tilde_arrays, sin2u_over_2r, sinc_g,
                      sinc_s, sinc_t)

__all__ = [
    "EnergyBreakdown", "QuadratureError",
    "u_from_v", "v_from_u", "nonlinearity_u", "rhs_v", "a_tilde",
    "build_phi", "rhs_phi", "phi_second_time_derivative", "recover_grad_v",
    "energy", "topological_charge", "integrate_in_y",
]


class QuadratureError(RuntimeError):
    """Adaptive y-quadrature failed to converge; carries the worst node."""

    def __init__(self, radius: float, err: float, tol: float):
        super().__init__(
            f"y-quadrature did not reach tol={tol:g} (worst node r={radius:g}, err={err:g})")
        self.radius = radius
        self.err = err


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic: float
    gradient: float
    potential: float
    total: float
    boundary_tail: float = 0.0  # energy density at the outer edge (truncation indicator)


# ---------------------------------------------------------------- transforms

def u_from_v(v: VState, cut: CutoffProfile, grid: RadialGrid) -> UState:
    """u = r v + phi, u_t = r v_t."""
    r = grid.node_radii
    return UState(u=r * v.v + cut.phi_cut, u_t=r * v.v_t, t=v.t)


def v_from_u(u: UState, cut: CutoffProfile, grid: RadialGrid,
             trace_tol: float = 1e-3) -> VState:
    """v = (u - phi)/r; rejects data whose deviation from the plateau fails
    to vanish (at least linearly) at the axis, which would make v singular."""
    r = grid.node_radii
    d = u.u - cut.phi_cut
    # constant term of a quadratic fit through the first cells: must vanish
    cols = np.column_stack([np.ones(3), r[:3], r[:3] ** 2])
    c0 = float(np.linalg.solve(cols, d[:3])[0])
    scale = max(1.0, float(np.max(np.abs(d))))
    if abs(c0) > trace_tol * scale:
        raise ValueError(
            f"u - phi does not vanish at the axis (trace {c0:.3e}); v would be singular")
    return VState(v=d / r, v_t=u.u_t / r, t=u.t)


# ------------------------------------------------------------- nonlinearity

def _angle_reduce(u: np.ndarray) -> np.ndarray:
    """u minus its nearest multiple of pi (sin^2 and sin 2u are invariant)."""
    return u - np.pi * np.round(u / np.pi)


def nonlinearity_u(u: UState, grid: RadialGrid, u_r: np.ndarray | None = None) -> np.ndarray:
    """N(r, u, grad u) of the recast angle equation Box_{2+1} u = N."""
    r = grid.node_radii
    if u_r is None:
        c = origin_value(u.u, grid, parity="odd")
        u_r = radial_derivative(u.u - c, grid, "odd")
    d = _angle_reduce(u.u)
    s2 = np.sin(d) ** 2
    A = 1.0 + s2 / r**2
    return (-np.sin(2.0 * d) / (2.0 * r**2) * (1.0 + u.u_t**2 - u_r**2)
            - 2.0 * s2 / r**3 * u_r) / A


def _bracket_lt1(r, v, v_t, v_r):
    """(1/r) N(r, rv, grad(rv)) + v/r^2 in the cancellation-free form."""
    x = r * v
    s = sinc_s(x)
    sg = s * sinc_g(x)
    return (4.0 * v**3 * sinc_t(2.0 * x)
            - v**5 * sg
            - v * sinc_s(2.0 * x) * (v_t**2 - v_r**2)
            - 2.0 * r * v**4 * v_r * sg) / (1.0 + (v * s) ** 2)


def rhs_v(v: VState, cut: CutoffProfile, grid: RadialGrid,
          v_r: np.ndarray | None = None) -> np.ndarray:
    """Full right-hand side of the lifted wave equation Box_{4+1} v = rhs."""
    r = grid.node_radii
    if v_r is None:
        v_r = radial_derivative(v.v, grid, "even")
    out = cut.lap2_phi / r + cut.phi_lt1 * _bracket_lt1(r, v.v, v.v_t, v_r)
    m = cut.phi_gt1 > 0.0
    if np.any(m):
        rm = r[m]
        um = rm * v.v[m] + cut.phi_cut[m]
        ur = v.v[m] + rm * v_r[m] + cut.phi_cut_d1[m]
        ut = rm * v.v_t[m]
        d = _angle_reduce(um)
        s2 = np.sin(d) ** 2
        A = 1.0 + s2 / rm**2
        Nu = (-np.sin(2.0 * d) / (2.0 * rm**2) * (1.0 + ut**2 - ur**2)
              - 2.0 * s2 / rm**3 * ur) / A
        out[m] += cut.phi_gt1[m] * (Nu / rm + v.v[m] / rm**2)
    return out


# ----------------------------------------------------------- kernel point op

def a_tilde(r: float, y: float, cut: CutoffProfile, grid: RadialGrid) -> AuxKernelPoint:
    """Kernel At and its derivatives at a single (r, y); r need not be a node."""
    from ._bridge import bridge, bridge_d1
    if r <= 0.0:
        raise ValueError("a_tilde needs r > 0")
    amp = cut.n1 * np.pi
    phi = amp * bridge(2.0 - r)
    phi_d1 = -amp * bridge_d1(2.0 - r)
    At, At_r, At_y = a_tilde_arrays(np.asarray(r), np.asarray(y),
                                    np.asarray(phi), np.asarray(phi_d1), cut.n1)
    return AuxKernelPoint(a_tilde=float(At), a_tilde_r=float(At_r), a_tilde_y=float(At_y))


# --------------------------------------------------------- y-quadratures

_GL15 = np.polynomial.legendre.leggauss(15)
_GL7 = np.polynomial.legendre.leggauss(7)


def integrate_in_y(kind: str, v: np.ndarray, cut: CutoffProfile, grid: RadialGrid,
                   tol: float = 1e-11, max_doublings: int = 30) -> np.ndarray:
    """Adaptive Gauss-Legendre integral_0^{v_j} f(At(r_j, y)) dy per node.

    kind: 'sqrt'    -> At^{1/2}
          'inv32'   -> At^{-3/2}
          'dr_inv12'-> At^{-1/2} At_r
    """
    r = grid.node_radii
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    active = np.abs(v) > 1e-300
    if not np.any(active):
        return out

    def f(rr, yy, idx):
        At, At_r, _ = a_tilde_arrays(rr, yy, cut.phi_cut[idx][:, None, None],
                                     cut.phi_cut_d1[idx][:, None, None], cut.n1)
        if kind == "sqrt":
            return np.sqrt(At)
        if kind == "inv32":
            return At ** -1.5
        if kind == "dr_inv12":
            return At_r / np.sqrt(At)
        raise ValueError(f"unknown integrand kind {kind!r}")

    idx = np.where(active)[0]
    # initial panel count grows with the oscillation scale r|v|
    panels = 1 + np.floor(r[idx] * np.abs(v[idx]) / 2.5).astype(int)
    err = np.full(idx.size, np.inf)
    for _ in range(max_doublings):
        vals = np.empty(idx.size)
        for m in np.unique(panels):
            sel = panels == m
            ii = idx[sel]
            edges = v[ii][:, None] * np.linspace(0.0, 1.0, m + 1)[None, :]
            mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
            half = 0.5 * (edges[:, 1:] - edges[:, :-1])
            rr = r[ii][:, None, None]
            y15 = mid[:, :, None] + half[:, :, None] * _GL15[0][None, None, :]
            hi = np.einsum("ijk,k,ij->i", f(rr, y15, ii), _GL15[1], half)
            y7 = mid[:, :, None] + half[:, :, None] * _GL7[0][None, None, :]
            lo = np.einsum("ijk,k,ij->i", f(rr, y7, ii), _GL7[1], half)
            vals[sel] = hi
            err[sel] = np.abs(hi - lo)
        out[idx] = vals
        bad = err > tol
        if not np.any(bad):
            return out
        idx = idx[bad]
        panels = panels[bad] * 2
        err = err[bad]
    worst = int(np.argmax(err))
    raise QuadratureError(radius=float(r[idx[worst]]), err=float(err[worst]), tol=tol)


# ------------------------------------------------------------- Phi chain

def build_phi(v: VState, cut: CutoffProfile, grid: RadialGrid,
              tol: float = 1e-11) -> PhiState:
    """Phi = int_0^v At^{1/2} dy + tail;  Phi_t = At^{1/2}(r, v) v_t."""
    r = grid.node_radii
    phi = integrate_in_y("sqrt", v.v, cut, grid, tol=tol) + cut.tail_phi
    At, _, _ = a_tilde_arrays(r, v.v, cut.phi_cut, cut.phi_cut_d1, cut.n1)
    return PhiState(phi=phi, phi_t=np.sqrt(At) * v.v_t, t=v.t)


def rhs_phi(v: VState, cut: CutoffProfile, grid: RadialGrid,
            tol: float = 1e-11, phi: PhiState | None = None) -> np.ndarray:
    """Right-hand side of Box_{4+1} Phi = Phi - int_0^v At^{-3/2} dy + tail."""
    if phi is None:
        phi = build_phi(v, cut, grid, tol=tol)
    return phi.phi - integrate_in_y("inv32", v.v, cut, grid, tol=tol) + cut.tail_box


def phi_second_time_derivative(v: VState, v_tt: np.ndarray, cut: CutoffProfile,
                               grid: RadialGrid) -> np.ndarray:
    """Phi_tt = At^{1/2} v_tt + At^{-1/2} (sin 2u / 2r) v_t^2."""
    r = grid.node_radii
    At, _, _ = a_tilde_arrays(r, v.v, cut.phi_cut, cut.phi_cut_d1, cut.n1)
    half_sin = sin2u_over_2r(r, v.v, cut.phi_cut, cut.n1)
    return np.sqrt(At) * v_tt + half_sin * v.v_t**2 / np.sqrt(At)


def recover_grad_v(phi: PhiState, v: VState, cut: CutoffProfile, grid: RadialGrid,
                   tol: float = 1e-11) -> tuple[np.ndarray, np.ndarray]:
    """Invert the Phi derivative formulas for (v_t, v_r)."""
    r = grid.node_radii
    At, _, _ = a_tilde_arrays(r, v.v, cut.phi_cut, cut.phi_cut_d1, cut.n1)
    root = np.sqrt(At)
    v_t = phi.phi_t / root
    phi_r = radial_derivative(phi.phi, grid, "even")
    correction = 0.5 * integrate_in_y("dr_inv12", v.v, cut, grid, tol=tol) + cut.tail_phi_d1
    v_r = (phi_r - correction) / root
    return v_t, v_r


# --------------------------------------------------------------- functionals

def energy(u: UState, grid: RadialGrid, u_r: np.ndarray | None = None) -> EnergyBreakdown:
    """Conserved energy of the angle equation, split into its three parts."""
    r = grid.node_radii
    if u_r is None:
        c = origin_value(u.u, grid, parity="odd")
        u_r = radial_derivative(u.u - c, grid, "odd")
    s2 = np.sin(_angle_reduce(u.u)) ** 2
    factor = 1.0 + s2 / r**2
    kin = radial_integral(0.5 * factor * u.u_t**2, grid, 2)
    grad = radial_integral(0.5 * factor * u_r**2, grid, 2)
    pot = radial_integral(0.5 * s2 / r**2, grid, 2)
    tail = float((0.5 * factor[-1] * (u.u_t[-1] ** 2 + u_r[-1] ** 2)
                  + 0.5 * s2[-1] / r[-1] ** 2) * r[-1])
    return EnergyBreakdown(kinetic=kin, gradient=grad, potential=pot,
                           total=kin + grad + pot, boundary_tail=tail)


def topological_charge(u: UState, grid: RadialGrid, tol: float = 0.05,
                       strict: bool = True) -> tuple[int, float]:
    """Nearest integer to (u(r_max) - u(0))/pi, plus the raw ratio."""
    u0 = origin_value(u.u, grid, parity="odd")
    uR = edge_value(u.u, grid)
    ratio = (uR - u0) / np.pi
    q = int(np.round(ratio))
    if strict and abs(ratio - q) > tol:
        raise ValueError(f"charge ratio {ratio:.4f} deviates from integer by > {tol}")
    return q, float(ratio)
