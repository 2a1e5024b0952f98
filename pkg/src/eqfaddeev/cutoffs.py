"""The smooth cutoff family and the radial tail functions of the transform chain.

phi      : == N1*pi on [0,1], == 0 on [2,inf), smooth decreasing
phi_<1   : == 1 on [0,1/2], == 0 on [1,inf)
phi_>1   : 1 - phi_<1

On top of the cutoffs this module tabulates the three radial profiles that
make the auxiliary-field identities exact rather than schematic.  Writing
A(r,w) = 1 + sin^2(w)/r^2 and

    P(r) = int_0^{N1 pi} A^{-3/2} dw          D(r) = phi_>1(r) P(r) / r
    Q(r) = int_{phi(r)}^{N1 pi} A^{1/2} dw    K(r) = Q(r) / r
    Jq(r) = int_{phi(r)}^{N1 pi} A^{-3/2} dw  J(r) = Jq(r) / r

the auxiliary field is Phi = int_0^v At^{1/2} dy + (D - K)  (the added term
D is the L^2 repair of the construction; K collects the change of variables
from the plateau), its wave equation carries the source J - D - Lap4 D, and
d/dr of the tail is D' - K'.  All integrals are smooth 1-D quadratures in w
with analytic differentiation under the integral sign; everything vanishes
identically for r <= 1/2 and for N1 = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._bridge import bridge, bridge_d1, bridge_d2
from .grid import RadialGrid

__all__ = ["CutoffProfile", "build_cutoffs"]

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)
_GL_NODES_LO, _GL_WEIGHTS_LO = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True)
class CutoffProfile:
    """Cutoffs, their first two derivatives, and the transform-chain tails,
    tabulated on the grid nodes."""

    n1: int
    phi_cut: np.ndarray
    phi_cut_d1: np.ndarray
    phi_cut_d2: np.ndarray
    phi_lt1: np.ndarray
    phi_lt1_d1: np.ndarray
    phi_lt1_d2: np.ndarray
    phi_gt1: np.ndarray
    phi_gt1_d1: np.ndarray
    phi_gt1_d2: np.ndarray
    phi_ge_half: np.ndarray      # r^3 * (D - K): generic smooth profile, supp {r >= 1/2}
    phi_ge_half_d1: np.ndarray
    phi_ge_half_d2: np.ndarray
    tail_phi: np.ndarray         # D - K            (tail of the Phi formula)
    tail_phi_d1: np.ndarray      # D' - K'          (tail of the Phi_r formula)
    tail_box: np.ndarray         # J - D - Lap4 D   (tail of the Box Phi formula)
    lap2_phi: np.ndarray         # phi'' + phi'/r   (source term of the v equation)

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            val = getattr(self, name)
            if isinstance(val, np.ndarray):
                val.setflags(write=False)


def _quad_w(lo, hi, integrand, tol=1e-12, max_doublings=8):
    """Vectorized quadrature of integrand(w) over [lo_i, hi] per node i.

    lo is an array (per node), hi a scalar.  Composite Gauss-Legendre with
    panel doubling until the embedded lower-order estimate agrees."""
    lo = np.asarray(lo, dtype=float)
    hi = float(hi)
    out = np.zeros_like(lo)
    active = (hi - lo) > 1e-300
    if not np.any(active):
        return out
    npanels = 2
    idx = np.where(active)[0]
    for _ in range(max_doublings):
        loa = lo[idx]
        edges = loa[:, None] + (hi - loa)[:, None] * np.linspace(0.0, 1.0, npanels + 1)[None, :]
        mid = 0.5 * (edges[:, 1:] + edges[:, :-1])
        half = 0.5 * (edges[:, 1:] - edges[:, :-1])
        w_hi = mid[:, :, None] + half[:, :, None] * _GL_NODES[None, None, :]
        val_hi = np.einsum("ijk,k,ij->i", integrand(w_hi, idx), _GL_WEIGHTS, half)
        w_lo = mid[:, :, None] + half[:, :, None] * _GL_NODES_LO[None, None, :]
        val_lo = np.einsum("ijk,k,ij->i", integrand(w_lo, idx), _GL_WEIGHTS_LO, half)
        out[idx] = val_hi
        bad = np.abs(val_hi - val_lo) > tol * np.maximum(1.0, np.abs(val_hi))
        if not np.any(bad):
            return out
        idx = idx[bad]
        npanels *= 2
    return out


def build_cutoffs(n1: int, grid: RadialGrid) -> CutoffProfile:
    r = grid.node_radii
    n1 = int(n1)
    amp = n1 * np.pi

    # phi: bridge of (2 - r); transitions on [1, 2], decreasing
    phi = amp * bridge(2.0 - r)
    phi_d1 = -amp * bridge_d1(2.0 - r)
    phi_d2 = amp * bridge_d2(2.0 - r)

    # phi_<1: bridge of 2(1 - r); transitions on [1/2, 1]
    lt1 = bridge(2.0 * (1.0 - r))
    lt1_d1 = -2.0 * bridge_d1(2.0 * (1.0 - r))
    lt1_d2 = 4.0 * bridge_d2(2.0 * (1.0 - r))
    gt1 = 1.0 - lt1

    lap2_phi = phi_d2 + phi_d1 / r

    zeros = np.zeros_like(r)
    if n1 == 0:
        tail_phi = zeros.copy()
        tail_phi_d1 = zeros.copy()
        tail_phi_d2 = zeros.copy()
        tail_box = zeros.copy()
    else:
        sin2 = lambda w: np.sin(w) ** 2  # noqa: E731

        def A_of(w, rr):
            return 1.0 + sin2(w) / rr**2

        def over(fn):
            # integrand factory on [0 or phi, n1*pi]; rr broadcast to panels
            def integrand(w, idx):
                rr = r[idx][:, None, None]
                return fn(w, rr)
            return integrand

        # P family on [0, n1 pi], needed where phi_>1 > 0
        maskD = gt1 > 0.0
        loP = np.where(maskD, 0.0, amp)
        P = _quad_w(loP, amp, over(lambda w, rr: A_of(w, rr) ** -1.5))
        P1 = _quad_w(loP, amp, over(lambda w, rr: 3.0 * sin2(w) * A_of(w, rr) ** -2.5 / rr**3))
        P2 = _quad_w(loP, amp, over(lambda w, rr: (15.0 * sin2(w) ** 2 * A_of(w, rr) ** -3.5 / rr**6
                                                   - 9.0 * sin2(w) * A_of(w, rr) ** -2.5 / rr**4)))

        # Q / Jq family on [phi(r), n1 pi], nonzero only where phi < n1 pi
        Q = _quad_w(phi, amp, over(lambda w, rr: np.sqrt(A_of(w, rr))))
        Qr_int = _quad_w(phi, amp, over(lambda w, rr: -sin2(w) / (np.sqrt(A_of(w, rr)) * rr**3)))
        Qrr_int = _quad_w(phi, amp, over(lambda w, rr: (3.0 * sin2(w) / (np.sqrt(A_of(w, rr)) * rr**4)
                                                        - sin2(w) ** 2 * A_of(w, rr) ** -1.5 / rr**6)))
        Jq = _quad_w(phi, amp, over(lambda w, rr: A_of(w, rr) ** -1.5))

        Aphi = 1.0 + np.sin(phi) ** 2 / r**2
        g_at_phi = -np.sin(phi) ** 2 / (np.sqrt(Aphi) * r**3)
        gw_at_phi = np.sin(2.0 * phi) / (2.0 * np.sqrt(Aphi) * r**2)
        Q1 = -phi_d1 * np.sqrt(Aphi) + Qr_int
        Q2 = -phi_d2 * np.sqrt(Aphi) - 2.0 * phi_d1 * g_at_phi - phi_d1**2 * gw_at_phi + Qrr_int

        K = Q / r
        K1 = Q1 / r - Q / r**2
        K2 = Q2 / r - 2.0 * Q1 / r**2 + 2.0 * Q / r**3

        gt1_d1 = -lt1_d1
        gt1_d2 = -lt1_d2
        D = gt1 * P / r
        D1 = gt1_d1 * P / r + gt1 * P1 / r - gt1 * P / r**2
        D2 = (gt1_d2 * P + 2.0 * gt1_d1 * P1 + gt1 * P2) / r \
            - 2.0 * (gt1_d1 * P + gt1 * P1) / r**2 + 2.0 * gt1 * P / r**3
        lap4_D = D2 + 3.0 * D1 / r

        tail_phi = D - K
        tail_phi_d1 = D1 - K1
        tail_phi_d2 = D2 - K2
        tail_box = Jq / r - D - lap4_D

    phi_ge_half = r**3 * tail_phi
    phi_ge_half_d1 = 3.0 * r**2 * tail_phi + r**3 * tail_phi_d1
    phi_ge_half_d2 = 6.0 * r * tail_phi + 6.0 * r**2 * tail_phi_d1 + r**3 * tail_phi_d2

    return CutoffProfile(
        n1=n1,
        phi_cut=phi, phi_cut_d1=phi_d1, phi_cut_d2=phi_d2,
        phi_lt1=lt1, phi_lt1_d1=lt1_d1, phi_lt1_d2=lt1_d2,
        phi_gt1=gt1, phi_gt1_d1=-lt1_d1, phi_gt1_d2=-lt1_d2,
        phi_ge_half=phi_ge_half, phi_ge_half_d1=phi_ge_half_d1, phi_ge_half_d2=phi_ge_half_d2,
        tail_phi=tail_phi, tail_phi_d1=tail_phi_d1, tail_box=tail_box,
        lap2_phi=lap2_phi,
    )
