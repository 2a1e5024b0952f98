"""Built-in initial-data families.

Every profile is constructed to satisfy the compatibility traces exactly
(plateau value at the axis, decay at the outer edge), so it passes
validation by construction.
"""

from __future__ import annotations

import numpy as np

from .cutoffs import CutoffProfile
from .fields import UState
from .grid import RadialGrid
from .model import energy

__all__ = ["initial_data_registry", "PROFILE_NAMES", "solve_bump_amplitude"]

PROFILE_NAMES = ("plateau", "gauss-bump", "kinetic-kick", "large-amp")


def _gauss_bump(alpha: float, amplitude: float, cut: CutoffProfile,
                grid: RadialGrid) -> np.ndarray:
    """N1*pi at the axis blending into amplitude * N1*pi * exp(-alpha r^2)."""
    r = grid.node_radii
    amp = cut.n1 * np.pi
    return amp * cut.phi_lt1 + amplitude * amp * cut.phi_gt1 * np.exp(-alpha * r**2)


def solve_bump_amplitude(energy_factor: float, alpha: float, cut: CutoffProfile,
                         grid: RadialGrid, tol: float = 1e-10) -> float:
    """Amplitude making the gauss-bump energy equal energy_factor times the
    plateau energy (bisection; energy is continuous and increasing in the
    bracket used)."""
    zeros = np.zeros(grid.n_cells)
    e_plateau = energy(UState(u=cut.phi_cut, u_t=zeros), grid).total
    target = energy_factor * e_plateau

    def e_of(a):
        return energy(UState(u=_gauss_bump(alpha, a, cut, grid), u_t=zeros), grid).total

    lo, hi = 0.0, 1.0
    while e_of(hi) < target:
        hi *= 2.0
        if hi > 1e4:
            raise ValueError("could not bracket the requested energy factor")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if e_of(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def initial_data_registry(name: str, params: dict, cut: CutoffProfile,
                          grid: RadialGrid) -> tuple[np.ndarray, np.ndarray]:
    """(u0, u1) for a named family."""
    r = grid.node_radii
    zeros = np.zeros_like(r)
    if name == "plateau":
        return cut.phi_cut.copy(), zeros
    if name == "gauss-bump":
        alpha = float(params.get("alpha", 1.0))
        return _gauss_bump(alpha, 1.0, cut, grid), zeros
    if name == "kinetic-kick":
        beta = float(params.get("beta", 0.5))
        return cut.phi_cut.copy(), beta * r * np.exp(-r**2)
    if name == "large-amp":
        alpha = float(params.get("alpha", 1.0))
        if "amplitude" in params:
            a = float(params["amplitude"])
        else:
            a = solve_bump_amplitude(float(params.get("energy_factor", 10.0)),
                                     alpha, cut, grid)
        return _gauss_bump(alpha, a, cut, grid), zeros
    raise ValueError(f"unknown initial-data profile {name!r}; "
                     f"known: {', '.join(PROFILE_NAMES)}")
