"""Diagnostics and executable-inequality machinery: decay monitors, the
wave-equation residual of the auxiliary field, radial Sobolev / Hardy
inequality suites, the comparison function I(w), and initial-data
validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cutoffs import CutoffProfile
from .fields import ModelParams, UState, VState, PhiState
from .grid import (RadialGrid, l2_norm, laplacian_radial_4d, origin_value,
                   radial_derivative, radial_integral, edge_value)
from .kernels import a_tilde_arrays
from .model import (build_phi, energy, phi_second_time_derivative, rhs_phi,
                    topological_charge, u_from_v, v_from_u, EnergyBreakdown)
from .spectral import NormSpec, sobolev_norm

__all__ = [
    "DiagnosticsReport", "checkpoint_report", "comparison_I", "decay_monitors",
    "box_phi_residual", "inequality_suite_radial_sobolev", "inequality_suite_hardy",
    "validate_initial_data", "ValidationReport", "chain_inequality",
    "smooth_sample_family",
]


# ------------------------------------------------------------- comparison I

def comparison_I(w):
    """I(w) = int_0^w |sin z| dz, exact piecewise closed form (odd in w)."""
    w = np.asarray(w, dtype=float)
    scalar = w.ndim == 0
    a = np.abs(np.atleast_1d(w))
    k = np.floor(a / np.pi)
    frac = a - np.pi * k
    out = 2.0 * k + 1.0 - np.cos(frac)
    out *= np.sign(np.atleast_1d(w))
    return float(out[0]) if scalar else out


# ----------------------------------------------------------- decay monitors

def decay_monitors(u: UState, v: VState, phi: PhiState, cut: CutoffProfile,
                   grid: RadialGrid, v_r: np.ndarray | None = None) -> dict[str, float]:
    """Suprema of the weighted decay quantities plus the continuation norm."""
    r = grid.node_radii
    if v_r is None:
        v_r = radial_derivative(v.v, grid, "even")
    plateau = cut.n1 * np.pi
    sinu = np.sin(u.u - np.pi * np.round(u.u / np.pi))
    At, _, _ = a_tilde_arrays(r, v.v, cut.phi_cut, cut.phi_cut_d1, cut.n1)
    small = r <= 1.0
    out = {
        "u_minus_plateau": float(np.max(np.abs(u.u - plateau) / np.minimum(1.0, np.sqrt(r)))),
        "v_weighted": float(np.max((1.0 + r**1.5) * np.abs(v.v))),
        "phi_weighted": float(np.max((1.0 + r**1.5) * np.abs(phi.phi))),
        "a_minus_one_weighted": float(np.max((1.0 + r**3) * np.abs(At - 1.0))),
        "sinu_small_r": float(np.max(np.abs(sinu[small]) / np.sqrt(r[small]))),
        "sinu_large_r": float(np.max(np.sqrt(r[~small]) * np.abs(sinu[~small]))),
        "continuation": float(np.max((1.0 + r) * (np.abs(v.v) + np.abs(v.v_t) + np.abs(v_r)))),
    }
    return out


# -------------------------------------------------------- box-Phi residual

def box_phi_residual(v: VState, cut: CutoffProfile, grid: RadialGrid,
                     space_op: str = "fd4", tol: float = 1e-11) -> tuple[np.ndarray, float]:
    """Discrete residual of Box Phi = Phi - int At^{-3/2} + tail along a state.

    Phi_tt uses the PDE acceleration (not time differencing); the Laplacian
    of Phi uses the public fourth-order operators.  Returns (residual, L2)."""
    from .solver import acceleration_v

    phi = build_phi(v, cut, grid, tol=tol)
    v_tt = acceleration_v(v, cut, grid, space_op=space_op)
    phi_tt = phi_second_time_derivative(v, v_tt, cut, grid)
    box = phi_tt - laplacian_radial_4d(phi.phi, grid)
    res = box - rhs_phi(v, cut, grid, tol=tol, phi=phi)
    return res, l2_norm(res, grid, 4)


# --------------------------------------------------------- checkpoint report

@dataclass
class DiagnosticsReport:
    """Per-checkpoint record: conserved quantities, decay monitors, residuals."""

    t: float
    energy: EnergyBreakdown
    energy_drift_rel: float
    charge: int
    charge_ratio: float
    continuation: float
    monitors: dict[str, float]
    residual_box_phi: float | None
    sup_v: float
    sup_grad_v: float

    def to_dict(self) -> dict:
        d = {
            "t": self.t,
            "energy_total": self.energy.total,
            "energy_kinetic": self.energy.kinetic,
            "energy_gradient": self.energy.gradient,
            "energy_potential": self.energy.potential,
            "energy_drift_rel": self.energy_drift_rel,
            "charge": self.charge,
            "charge_ratio": self.charge_ratio,
            "continuation": self.continuation,
            "residual_box_phi": self.residual_box_phi,
            "sup_v": self.sup_v,
            "sup_grad_v": self.sup_grad_v,
        }
        d.update({f"monitor_{k}": val for k, val in sorted(self.monitors.items())})
        return d


def checkpoint_report(state: VState, cut: CutoffProfile, grid: RadialGrid,
                      e_ref: DiagnosticsReport | None = None,
                      with_residual: bool = True,
                      space_op: str = "fd4") -> DiagnosticsReport:
    u = u_from_v(state, cut, grid)
    v_r = radial_derivative(state.v, grid, "even")
    e = energy(u, grid)
    drift = 0.0 if e_ref is None else abs(e.total - e_ref.energy.total) / max(abs(e_ref.energy.total), 1e-300)
    q, ratio = topological_charge(u, grid, strict=False)
    phi = build_phi(state, cut, grid)
    mon = decay_monitors(u, state, phi, cut, grid, v_r=v_r)
    res_l2 = None
    if with_residual:
        _, res_l2 = box_phi_residual(state, cut, grid, space_op=space_op)
    return DiagnosticsReport(
        t=state.t, energy=e, energy_drift_rel=drift, charge=q, charge_ratio=ratio,
        continuation=mon["continuation"], monitors=mon, residual_box_phi=res_l2,
        sup_v=float(np.abs(state.v).max()),
        sup_grad_v=float((np.abs(state.v_t) + np.abs(v_r)).max()),
    )


# ------------------------------------------------------- inequality suites

def smooth_sample_family(grid: RadialGrid, seed: int, n_samples: int) -> list[np.ndarray]:
    """Deterministic family of smooth, decaying radial profiles.

    Extending the family keeps its prefix (the generator is consumed in a
    fixed per-sample order), which is what the stability assertions need."""
    rng = np.random.default_rng(seed)
    r = grid.node_radii
    out = []
    for _ in range(n_samples):
        f = np.zeros_like(r)
        for _ in range(3):
            a = rng.uniform(0.3, 1.0)
            b = rng.uniform(0.4, 2.5)
            c = rng.uniform(-0.5, 0.5)
            f = f + a * np.exp(-b * r**2) * (1.0 + c * r**2)
        out.append(f)
    return out


def inequality_suite_radial_sobolev(grid: RadialGrid, seed: int = 0,
                                    n_samples: int = 8) -> dict:
    """Weighted-decay-over-norm ratios for radial fields on R^4.

    R1(f; sigma) = sup_r r^{2-sigma}|f| / ||f||_{Hdot^sigma},  sigma in {1, 3/2}
    R2(f)        = sup_r r^{3/2}|f| / ||f||_{H^1}

    Reports the fitted constants (family maxima), their stability under
    enriching the family, and the exactness of the dilation identity for
    the homogeneous ratios."""
    r = grid.node_radii
    family = smooth_sample_family(grid, seed, 2 * n_samples)

    def r1(f, sigma, g=grid):
        num = float(np.max(g.node_radii ** (2.0 - sigma) * np.abs(f)))
        den = sobolev_norm(f, NormSpec(sigma=sigma, dim=4, homogeneous=True), g)
        return num / den

    def r2(f):
        num = float(np.max(r**1.5 * np.abs(f)))
        den = sobolev_norm(f, NormSpec(sigma=1.0, dim=4, homogeneous=False), grid)
        return num / den

    report = {"sigma": {}, "r2": {}, "dilation": {}}
    for sigma in (1.0, 1.5):
        base = [r1(f, sigma) for f in family[:n_samples]]
        rich = base + [r1(f, sigma) for f in family[n_samples:]]
        report["sigma"][sigma] = {
            "fitted": max(base),
            "fitted_enriched": max(rich),
            "stable": max(rich) <= 2.0 * max(base),
        }
    base2 = [r2(f) for f in family[:n_samples]]
    rich2 = base2 + [r2(f) for f in family[n_samples:]]
    report["r2"] = {"fitted": max(base2), "fitted_enriched": max(rich2),
                    "stable": max(rich2) <= 2.0 * max(base2)}

    # dilation identity f_lam(r) = f(lam r), lam = 2: computing the ratio of
    # f on this grid and of f_lam on the grid shrunk by lam gives bitwise-
    # parallel arithmetic, where the invariance is literally true.
    lam = 2.0
    small = RadialGrid(r_max=grid.r_max / lam, n_cells=grid.n_cells)
    for sigma in (1.0, 1.5):
        errs = []
        for f in family[:3]:
            ratio_big = r1(f, sigma)
            ratio_small = r1(f, sigma, g=small)  # same samples: f_lam(r/lam grid) = f(r_j)
            errs.append(abs(ratio_big - ratio_small) / ratio_big)
        report["dilation"][sigma] = max(errs)
    report["passed"] = (all(report["sigma"][s]["stable"] for s in report["sigma"])
                        and report["r2"]["stable"]
                        and all(e <= 1e-8 for e in report["dilation"].values()))
    return report


def inequality_suite_hardy(grid: RadialGrid, seed: int = 0, n_samples: int = 8) -> dict:
    """||g/r||_{L2(R^4)} <= C ||g'||_{L2(R^4)}; radial sharp constant is 1."""
    family = smooth_sample_family(grid, seed, 2 * n_samples)
    r = grid.node_radii

    def ratio(g, gg=grid):
        num = np.sqrt(radial_integral((g / gg.node_radii) ** 2, gg, 4))
        den = np.sqrt(radial_integral(radial_derivative(g, gg, "even") ** 2, gg, 4))
        return float(num / den)

    base = [ratio(g) for g in family[:n_samples]]
    rich = base + [ratio(g) for g in family[n_samples:]]
    lam = 2.0
    small = RadialGrid(r_max=grid.r_max / lam, n_cells=grid.n_cells)
    dil = max(abs(ratio(g) - ratio(g, small)) / ratio(g) for g in family[:3])
    fitted = max(rich)
    return {
        "fitted": fitted,
        "stable": max(rich) <= 2.0 * max(base),
        "sharp_ok": fitted <= 1.0 + 1e-3,
        "dilation": dil,
        "passed": (max(rich) <= 2.0 * max(base)) and fitted <= 1.0 + 1e-3 and dil <= 1e-8,
    }


# ------------------------------------------------------ chain inequality

def chain_inequality(u: UState, grid: RadialGrid, e_total: float) -> dict[str, np.ndarray]:
    """The pointwise chain I(|u - u(0)|) <= int_0^r |sin u||u_r| ds <= min{2E, sqrt(E) r}."""
    r = grid.node_radii
    c = origin_value(u.u, grid, parity="odd")
    u_r = radial_derivative(u.u - c, grid, "odd")
    integrand = np.abs(np.sin(u.u)) * np.abs(u_r)
    cum = np.cumsum(integrand) * grid.dr  # running midpoint sum
    lhs = comparison_I(np.abs(u.u - c))
    bound = np.minimum(2.0 * e_total, np.sqrt(e_total) * r)
    return {"lhs": lhs, "mid": cum, "bound": bound}


# ------------------------------------------------------ initial-data checks

@dataclass
class ValidationReport:
    passed: bool
    checks: dict = field(default_factory=dict)

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v["ok"]]


def validate_initial_data(u0: np.ndarray, u1: np.ndarray, params: ModelParams,
                          cut: CutoffProfile, grid: RadialGrid) -> ValidationReport:
    """Compatibility traces, finite energy, H^s norms of the lifted data, and
    finiteness of the auxiliary-field time derivatives at t = 0."""
    from .solver import acceleration_v

    tol = params.tolerances["boundary_trace"]
    checks: dict[str, dict] = {}

    def add(name, ok, value, detail=""):
        checks[name] = {"ok": bool(ok), "value": float(value), "detail": detail}

    plateau = params.n1 * np.pi
    u0 = np.asarray(u0, dtype=float)
    u1 = np.asarray(u1, dtype=float)
    t0 = origin_value(u0, grid, parity="odd")
    add("u0_origin_trace", abs(t0 - plateau) <= tol, t0 - plateau,
        f"u0(0) must equal N1*pi = {plateau:g}")
    te = edge_value(u0, grid)
    add("u0_edge_trace", abs(te) <= tol, te, "u0(r_max) must vanish")
    t1o = origin_value(u1, grid, parity="odd")
    add("u1_origin_trace", abs(t1o) <= tol, t1o, "u1(0) must vanish")
    t1e = edge_value(u1, grid)
    add("u1_edge_trace", abs(t1e) <= tol, t1e, "u1(r_max) must vanish")

    ustate = UState(u=u0, u_t=u1, t=0.0)
    e = energy(ustate, grid)
    add("energy_finite", np.isfinite(e.total), e.total)

    trace_ok = checks["u0_origin_trace"]["ok"]
    if trace_ok:
        v0 = v_from_u(ustate, cut, grid, trace_tol=1e-3)
        s = params.s_reg
        nv = sobolev_norm(v0.v, NormSpec(sigma=s, dim=4, homogeneous=False), grid)
        nvt = sobolev_norm(v0.v_t, NormSpec(sigma=s - 1.0, dim=4, homogeneous=False), grid)
        add("v0_hs_finite", np.isfinite(nv), nv, f"||v(0)||_H^{s:g}(R^4)")
        add("v1_hs_finite", np.isfinite(nvt), nvt, f"||v_t(0)||_H^{s - 1:g}(R^4)")

        phi0 = build_phi(v0, cut, grid)
        v_tt = acceleration_v(v0, cut, grid)
        phi_tt = phi_second_time_derivative(v0, v_tt, cut, grid)
        n_phit = sobolev_norm(phi0.phi_t, NormSpec(sigma=1.0, dim=4, homogeneous=True), grid)
        n_phitt = l2_norm(phi_tt, grid, 4)
        add("phi_t_h1dot_finite", np.isfinite(n_phit), n_phit, "||Phi_t(0)||_Hdot1(R^4)")
        add("phi_tt_l2_finite", np.isfinite(n_phitt), n_phitt, "||Phi_tt(0)||_L2(R^4)")
    else:
        add("v0_hs_finite", False, np.nan, "skipped: compatibility trace failed")

    return ValidationReport(passed=all(v["ok"] for v in checks.values()), checks=checks)
