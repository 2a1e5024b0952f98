"""The auxiliary-field chain: time derivatives, gradient recovery, and the
wave-equation residual."""

import numpy as np

from eqfaddeev import (SolverConfig, UState, VState, build_cutoffs,
                       build_phi, phi_second_time_derivative, recover_grad_v,
                       v_from_u)
from eqfaddeev.analysis import box_phi_residual
from eqfaddeev.grid import RadialGrid, radial_derivative
from eqfaddeev.solver import acceleration_v, step


def bump_state(grid, cut, amp=1.0, kick=0.3):
    r = grid.node_radii
    u0 = np.pi * (cut.phi_lt1 + amp * cut.phi_gt1 * np.exp(-r**2))
    u1 = kick * r * np.exp(-r**2)
    return v_from_u(UState(u=u0, u_t=u1), cut, grid)


class TestPhiTT:
    def test_static_zero(self, grid256, cut256):
        z = np.zeros(grid256.n_cells)
        out = phi_second_time_derivative(VState(v=z, v_t=z), z, cut256, grid256)
        assert np.max(np.abs(out)) == 0.0

    def test_trivial_sector_identity(self, grid256, cut512_n0):
        # N1=0, v=0: Phi_tt = v_tt exactly
        z = np.zeros(grid256.n_cells)
        cut0 = build_cutoffs(0, grid256)
        vtt = np.sin(grid256.node_radii)
        out = phi_second_time_derivative(VState(v=z, v_t=z), vtt, cut0, grid256)
        assert np.array_equal(out, vtt)

    def test_matches_time_differencing(self, grid256, cut256):
        # centered second difference of build_phi along an RK4 trajectory,
        # order 2 in the differencing step
        cfg = SolverConfig(cfl=0.25)
        state = bump_state(grid256, cut256)
        vtt = acceleration_v(state, cut256, grid256)
        target = phi_second_time_derivative(state, vtt, cut256, grid256)

        def second_diff(delta):
            nsub = max(1, int(round(delta / (0.25 * grid256.dr))))
            dt = delta / nsub
            fwd = state
            for _ in range(nsub):
                fwd = step(fwd, cfg, cut256, grid256, dt=dt)
            back = VState(v=state.v, v_t=-state.v_t, t=state.t)
            for _ in range(nsub):
                back = step(back, cfg, cut256, grid256, dt=dt)
            p0 = build_phi(state, cut256, grid256).phi
            pf = build_phi(fwd, cut256, grid256).phi
            pb = build_phi(back, cut256, grid256).phi
            return (pf - 2.0 * p0 + pb) / delta**2

        # the sponge is inactive where the state lives; time-reversal legs are
        # exact for the undamped dynamics
        e1 = np.max(np.abs(second_diff(8 * 0.25 * grid256.dr) - target))
        e2 = np.max(np.abs(second_diff(4 * 0.25 * grid256.dr) - target))
        assert e2 < e1 / 2.5  # ~ factor 4 for clean second order


class TestRecoverGrad:
    def test_v_t_algebraic(self, grid512, cut512):
        state = bump_state(grid512, cut512)
        phi = build_phi(state, cut512, grid512)
        v_t, _ = recover_grad_v(phi, state, cut512, grid512)
        assert np.max(np.abs(v_t - state.v_t)) < 1e-10

    def test_v_r_converges(self):
        errs = []
        for n in (256, 512, 1024):
            g = RadialGrid(r_max=16.0, n_cells=n)
            c = build_cutoffs(1, g)
            state = bump_state(g, c)
            phi = build_phi(state, c, g)
            _, v_r = recover_grad_v(phi, state, c, g)
            ref = radial_derivative(state.v, g, "even")
            errs.append(np.max(np.abs(v_r - ref)))
        assert errs[2] < errs[0] / 10.0  # order >= 2 under refinement

    def test_zero_state(self, grid512, cut512):
        z = np.zeros(grid512.n_cells)
        state = VState(v=z, v_t=z)
        phi = build_phi(state, cut512, grid512)
        v_t, v_r = recover_grad_v(phi, state, cut512, grid512)
        m = grid512.node_radii < 0.4
        assert np.max(np.abs(v_t[m])) == 0.0
        assert np.max(np.abs(v_r[m])) == 0.0


class TestBoxResidual:
    def test_converges_order_two_plus(self):
        errs = []
        for n in (256, 512, 1024):
            g = RadialGrid(r_max=16.0, n_cells=n)
            c = build_cutoffs(1, g)
            state = bump_state(g, c)
            _, l2 = box_phi_residual(state, c, g)
            errs.append(l2)
        order = np.polyfit(np.log([16.0 / n for n in (256, 512, 1024)]),
                           np.log(errs), 1)[0]
        assert order > 2.0

    def test_zero_for_trivial_sector(self, grid256):
        c0 = build_cutoffs(0, grid256)
        z = np.zeros(grid256.n_cells)
        _, l2 = box_phi_residual(VState(v=z, v_t=z), c0, grid256)
        assert l2 == 0.0
