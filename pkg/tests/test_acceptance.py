"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line with the measured numbers (run with -s to see them inline).

Criterion 1's absolute drift bound is asserted exactly as stated.  The
measured floor at the pinned configuration (classical RK4, dt = cfl*dr,
cfl = 0.4, n_cells = 2048) is ~6e-6 even with spectrally exact spatial
derivatives -- pure time-integration error (see README, expected failures) -- so
that single assertion is expected to fail honestly; the refinement clause
and every other criterion pass.
"""

import numpy as np
import pytest

from eqfaddeev import (ModelParams, NormSpec, SolverConfig, UState,
                       build_cutoffs, build_phi, comparison_I, energy,
                       hankel_forward, hankel_inverse,
                       inequality_suite_hardy, inequality_suite_radial_sobolev,
                       make_grid, recover_grad_v, sobolev_norm, u_from_v,
                       v_from_u, validate_initial_data)
from eqfaddeev.analysis import box_phi_residual, chain_inequality
from eqfaddeev.grid import l2_norm, radial_derivative
from eqfaddeev.harness import ExperimentConfig, manufactured_convergence
from eqfaddeev.model import phi_second_time_derivative
from eqfaddeev.profiles import initial_data_registry
from eqfaddeev.solver import acceleration_v, evolve


def line(tag: str, ok: bool, detail: str):
    print(f"[{tag}] {'PASS' if ok else 'FAIL'}: {detail}")


def _gauss_bump_run(n_cells, t_final=1.0, stride=None, with_residual=True,
                    space_op="fd4", store_states=False, profile=None):
    params = ModelParams(n1=1, r_max=16.0, n_cells=n_cells, cfl=0.4,
                         t_final=t_final)
    grid = make_grid(params)
    cut = build_cutoffs(1, grid)
    prof = profile or {"name": "gauss-bump", "params": {"alpha": 1.0}}
    u0, u1 = initial_data_registry(prof["name"], prof["params"], cut, grid)
    v0 = v_from_u(UState(u=u0, u_t=u1), cut, grid)
    cfg = SolverConfig(cfl=0.4, space_op=space_op,
                       checkpoint_stride=stride or 10**9)
    rec = evolve(v0, params, cfg, cut=cut, grid=grid,
                 store_states=store_states, with_residual=with_residual)
    return rec, cut, grid


@pytest.fixture(scope="module")
def run1():
    """Criterion-1 run: gauss-bump (N1=1, alpha=1), n=2048, cfl=0.4, t=1."""
    return _gauss_bump_run(2048, stride=16, store_states=True)


@pytest.fixture(scope="module")
def run1_refined():
    return _gauss_bump_run(4096, with_residual=False)


def _large_amp_run(factor, n_cells, cfl=0.2):
    """Resolved configuration for the global-regularity proxy probes: the 10x
    family needs n >= 2048 to track its focusing transient (gradient peak
    ~130, converged); resolution/kernel are not pinned by the criterion."""
    params = ModelParams(n1=1, r_max=16.0, n_cells=n_cells, cfl=cfl, t_final=5.0)
    grid = make_grid(params)
    cut = build_cutoffs(1, grid)
    u0, u1 = initial_data_registry("large-amp", {"energy_factor": factor}, cut, grid)
    v0 = v_from_u(UState(u=u0, u_t=u1), cut, grid)
    stride = max(1, int(round(0.25 / (cfl * grid.dr))))
    cfg = SolverConfig(cfl=cfl, space_op="spectral", checkpoint_stride=stride)
    rec = evolve(v0, params, cfg, cut=cut, grid=grid, with_residual=False)
    return rec, cut, grid


@pytest.fixture(scope="module")
def largeamp10():
    return _large_amp_run(10.0, 2048)


@pytest.fixture(scope="module")
def largeamp10_hi():
    return _large_amp_run(10.0, 4096)


class TestCriterion1:
    def test_drift_bound_as_stated(self, run1):
        rec, _, _ = run1
        drift = max(d.energy_drift_rel for d in rec.diagnostics)
        rec_s, _, _ = _gauss_bump_run(2048, with_residual=False, space_op="spectral")
        drift_s = max(d.energy_drift_rel for d in rec_s.diagnostics)
        ok = drift <= 1e-6
        line("C1-bound", ok,
             f"drift(fd4, n=2048)={drift:.3e}, drift(spectral, n=2048)={drift_s:.3e}, "
             f"required <= 1e-6 (time-error floor at pinned RK4/cfl; see README)")
        assert ok, (
            f"relative energy drift {drift:.3e} exceeds 1e-6 at the pinned "
            f"configuration; floor with exact spatial derivatives is {drift_s:.3e}")

    def test_drift_refinement_factor(self, run1, run1_refined):
        rec, _, _ = run1
        rec4, _, _ = run1_refined
        d2048 = max(d.energy_drift_rel for d in rec.diagnostics)
        d4096 = max(d.energy_drift_rel for d in rec4.diagnostics)
        ok = d4096 <= d2048 / 4.0
        line("C1-refine", ok, f"drift 2048 -> 4096: {d2048:.3e} -> {d4096:.3e} "
                              f"(factor {d2048 / d4096:.1f}, required >= 4)")
        assert ok


class TestReferenceConservation:
    def test_drift_at_reference_resolution(self):
        # the conservation example at a resolution/kernel of our choosing:
        # n=4096 with exact spatial derivatives sits at the RK4 error floor
        rec, _, _ = _gauss_bump_run(4096, with_residual=False, space_op="spectral")
        drift = max(d.energy_drift_rel for d in rec.diagnostics)
        ok = drift <= 1e-6
        line("conservation-reference", ok,
             f"drift {drift:.2e} <= 1e-6 at n=4096/spectral over t_final=1")
        assert ok


class TestCriterion2:
    def test_charge_conserved_all_runs(self, run1, largeamp10, largeamp10_hi):
        records = [run1[0], largeamp10[0], largeamp10_hi[0]]
        ok = True
        for rec in records:
            charges = {d.charge for d in rec.diagnostics}
            devs = max(abs(d.charge_ratio - d.charge) for d in rec.diagnostics)
            ok &= charges == {-1} and devs < 0.05
        line("C2", ok, "charge integer -1 and constant on every completed run, "
                       "raw-ratio deviation < 0.05")
        assert ok


class TestCriterion3:
    def test_manufactured_orders(self):
        cfg = ExperimentConfig.from_dict({
            "kind": "converge",
            "model": {"n1": 1, "r_max": 16.0, "n_cells": 256, "cfl": 0.4,
                      "t_final": 1.0},
            "data_profile": {"name": "plateau", "params": {}},
            "output_dir": "unused",
        })
        study = manufactured_convergence(cfg, levels=3)
        sp, tp = study["spatial_order"], study["temporal_order"]
        ok = sp >= 3.5 and tp >= 3.5
        line("C3", ok, f"fitted spatial order {sp:.2f}, temporal order {tp:.2f} "
                       f"(required >= 3.5)")
        assert ok


class TestCriterion4:
    def test_box_phi_residual_order(self):
        errs, hs = [], []
        for n in (256, 512, 1024):
            rec, cut, grid = _gauss_bump_run(n, t_final=0.25, with_residual=False)
            _, l2 = box_phi_residual(rec.final_state, cut, grid)
            errs.append(l2)
            hs.append(grid.dr)
        order = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        ok = order >= 2.0
        line("C4", ok, f"Box-Phi residual L2 {errs} under refinement, "
                       f"fitted order {order:.2f} (required >= 2)")
        assert ok


class TestCriterion5:
    def test_gradient_recovery(self):
        vt_errs, vr_errs, hs = [], [], []
        for n in (256, 512, 1024):
            rec, cut, grid = _gauss_bump_run(n, t_final=0.25, with_residual=False)
            state = rec.final_state
            phi = build_phi(state, cut, grid)
            v_t, v_r = recover_grad_v(phi, state, cut, grid)
            vt_errs.append(np.max(np.abs(v_t - state.v_t)))
            vr_errs.append(np.max(np.abs(v_r - radial_derivative(state.v, grid, "even"))))
            hs.append(grid.dr)
        order = np.polyfit(np.log(hs), np.log(vr_errs), 1)[0]
        ok = max(vt_errs) <= 1e-10 and order >= 2.0
        line("C5", ok, f"recovered v_t max err {max(vt_errs):.2e} (<= 1e-10); "
                       f"v_r error order {order:.2f} (required >= 2)")
        assert ok


def _regularity_clauses(rec):
    conts = np.array([d.continuation for d in rec.diagnostics])
    times = np.array([d.t for d in rec.diagnostics])
    completed = rec.terminal_status == "completed"
    finite = bool(np.isfinite(conts).all())
    early = conts[times <= 1.0 + 1e-9].max()
    bounded = conts.max() <= 2.0 * early
    return completed, finite, bounded, conts, early


class TestCriterion6:
    def test_global_regularity_proxy_10x(self, largeamp10):
        rec, _, _ = largeamp10
        completed, finite, bounded, conts, early = _regularity_clauses(rec)
        ok = completed and finite and bounded
        line("C6-10x", ok,
             f"status={rec.terminal_status}, continuation finite at every "
             f"checkpoint, max {conts.max():.1f} <= 2x early max {2 * early:.1f}")
        assert ok

    def test_global_regularity_proxy_50x(self):
        # expected red: the 50x probe's focusing cascade is unresolved at any
        # desk-scale grid (tried n up to 8192, cfl down to 0.05, both spatial
        # kernels: the run dies near t ~ 0.7 with gradients still growing
        # under refinement).  See README, expected failures.
        rec, _, _ = _large_amp_run(50.0, 2048)
        completed, finite, bounded, conts, early = _regularity_clauses(rec)
        ok = completed and finite and bounded
        line("C6-50x", ok,
             f"status={rec.terminal_status} at t={rec.final_state.t:.2f} "
             f"(desk-scale resolution limit; see README)")
        assert ok, (f"50x run ended {rec.terminal_status} at t={rec.final_state.t:.2f}; "
                    "unattainable at desk scale; see README, expected failures")


class TestCriterion7:
    def test_decay_monitors(self, largeamp10, largeamp10_hi):
        ok = True
        for rec, _, _ in (largeamp10, largeamp10_hi):
            for d in rec.diagnostics:
                ok &= all(np.isfinite(v) for v in d.monitors.values())
        # calibrated constant of the (1+r^3)|At-1| monitor stable across
        # resolutions on the (completing) 10x family
        c_lo = max(d.monitors["a_minus_one_weighted"] for d in largeamp10[0].diagnostics)
        c_hi = max(d.monitors["a_minus_one_weighted"] for d in largeamp10_hi[0].diagnostics)
        ratio = max(c_lo, c_hi) / min(c_lo, c_hi)
        ok &= ratio <= 2.0
        line("C7", ok, f"all monitor suprema finite on the long-horizon run checkpoints; "
                       f"(1+r^3)|At-1| constant {c_lo:.3f} (n=2048) vs {c_hi:.3f} "
                       f"(n=4096), ratio {ratio:.2f} <= 2")
        assert ok


class TestCriterion8:
    def test_spectral_exactness(self):
        grid = make_grid(ModelParams(n1=0, r_max=16.0, n_cells=1024))
        f = np.exp(-grid.node_radii**2 / 2.0)
        l2 = sobolev_norm(f, NormSpec(sigma=0.0, dim=4), grid)
        h1 = sobolev_norm(f, NormSpec(sigma=1.0, dim=4), grid)
        F = hankel_forward(f, grid, dim=4)
        back = hankel_inverse(F, grid)
        pl = abs(F.l2_norm() - l2_norm(f, grid, 4)) / l2_norm(f, grid, 4)
        rt = l2_norm(back - f, grid, 4) / l2_norm(f, grid, 4)
        e_l2, e_h1 = abs(l2 - np.pi), abs(h1 - np.pi * np.sqrt(2.0))
        ok = e_l2 <= 1e-7 and e_h1 <= 1e-7 and pl <= 1e-8 and rt <= 1e-8
        line("C8", ok, f"|L2-pi|={e_l2:.2e}, |H1-pi*sqrt2|={e_h1:.2e} (<=1e-7); "
                       f"plancherel {pl:.2e}, round trip {rt:.2e} (<=1e-8)")
        assert ok


class TestCriterion9:
    def test_inequality_suites(self):
        grid = make_grid(ModelParams(n1=0, r_max=16.0, n_cells=1024))
        rs = inequality_suite_radial_sobolev(grid, seed=11, n_samples=8)
        hd = inequality_suite_hardy(grid, seed=11, n_samples=8)
        ok = rs["passed"] and hd["passed"]
        line("C9", ok,
             f"radial-Sobolev fitted {rs['sigma'][1.0]['fitted']:.3f}/"
             f"{rs['sigma'][1.5]['fitted']:.3f} stable, dilation "
             f"{max(rs['dilation'].values()):.1e}; Hardy fitted {hd['fitted']:.4f} "
             f"(<= 1.001), dilation {hd['dilation']:.1e}")
        assert ok


class TestCriterion10:
    PROFILES = [("plateau", {}), ("gauss-bump", {"alpha": 1.0}),
                ("kinetic-kick", {"beta": 0.5}),
                ("large-amp", {"energy_factor": 10.0})]

    def test_initial_data_norms_stable(self):
        ok = True
        details = []
        for name, prof_params in self.PROFILES:
            vals = {}
            for n in (512, 1024):
                params = ModelParams(n1=1, r_max=16.0, n_cells=n, s_reg=3.1)
                grid = make_grid(params)
                cut = build_cutoffs(1, grid)
                u0, u1 = initial_data_registry(name, prof_params, cut, grid)
                v0 = v_from_u(UState(u=u0, u_t=u1), cut, grid)
                phi0 = build_phi(v0, cut, grid)
                v_tt = acceleration_v(v0, cut, grid)
                phi_tt = phi_second_time_derivative(v0, v_tt, cut, grid)
                total = (sobolev_norm(phi0.phi_t, NormSpec(sigma=1.0, dim=4), grid)
                         + l2_norm(phi_tt, grid, 4))
                vals[n] = total
                rep = validate_initial_data(u0, u1, params, cut, grid)
                ok &= rep.passed
            finite = all(np.isfinite(v) for v in vals.values())
            ratio = max(vals.values()) / max(min(vals.values()), 1e-300) \
                if min(vals.values()) > 0 else 1.0
            ok &= finite and ratio <= 2.0
            details.append(f"{name}: {vals[512]:.4g}/{vals[1024]:.4g}")
        line("C10", ok, "||Phi_t(0)||_H1 + ||Phi_tt(0)||_L2 finite and <= 2x "
                        "stable under refinement -- " + "; ".join(details))
        assert ok


class TestCriterion11:
    def test_comparison_exactness_and_chain(self, run1):
        rec, cut, grid = run1
        ok = comparison_I(np.pi) == 2.0
        rng = np.random.default_rng(7)
        w = np.sort(rng.uniform(-12 * np.pi, 12 * np.pi, 4000))
        ok &= bool(np.max(np.abs(comparison_I(-w) + comparison_I(w))) == 0.0)
        pairs = rng.uniform(-40, 40, size=(2000, 2))
        lips = np.abs(comparison_I(pairs[:, 0]) - comparison_I(pairs[:, 1])) \
            <= np.abs(pairs[:, 0] - pairs[:, 1]) * (1 + 1e-12) + 1e-12
        ok &= bool(lips.all())

        # chain inequality at 20 random checkpoints of run 1
        states = rec.states
        picks = rng.integers(0, len(states), size=20)
        nodes = rng.integers(1, grid.n_cells, size=20)
        worst = 0.0
        for ci, nj in zip(picks, nodes):
            u = u_from_v(states[ci], cut, grid)
            e = energy(u, grid).total
            chain = chain_inequality(u, grid, e)
            ok &= chain["lhs"][nj] <= 1.05 * chain["mid"][nj] + 1e-12
            ok &= chain["mid"][nj] <= 1.05 * chain["bound"][nj] + 1e-12
            worst = max(worst, chain["lhs"][nj] / max(chain["bound"][nj], 1e-300))
        line("C11", ok, f"I(pi)=2 exact, odd + 1-Lipschitz on dense samples; "
                        f"chain holds at 20 random checkpoints "
                        f"(worst lhs/bound {worst:.3f})")
        assert ok
