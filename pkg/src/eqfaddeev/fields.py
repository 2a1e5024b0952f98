"""Field snapshots and model parameters.

All snapshots are immutable after construction (arrays are frozen); the
operations acting on them are pure functions, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

__all__ = ["UState", "VState", "PhiState", "ModelParams", "DEFAULT_TOLERANCES"]


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class UState:
    """Azimuthal angle snapshot: u, u_t on the grid nodes at time t."""

    u: np.ndarray
    u_t: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u))
        object.__setattr__(self, "u_t", _frozen(self.u_t))
        if self.u.shape != self.u_t.shape:
            raise ValueError("u and u_t shapes differ")

    @property
    def all_finite(self) -> bool:
        return bool(np.isfinite(self.u).all() and np.isfinite(self.u_t).all())


@dataclass(frozen=True)
class VState:
    """Lifted field snapshot (u = r v + phi)."""

    v: np.ndarray
    v_t: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "v", _frozen(self.v))
        object.__setattr__(self, "v_t", _frozen(self.v_t))
        if self.v.shape != self.v_t.shape:
            raise ValueError("v and v_t shapes differ")

    @property
    def all_finite(self) -> bool:
        return bool(np.isfinite(self.v).all() and np.isfinite(self.v_t).all())


@dataclass(frozen=True)
class PhiState:
    """Auxiliary field snapshot (integral transform of v)."""

    phi: np.ndarray
    phi_t: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "phi", _frozen(self.phi))
        object.__setattr__(self, "phi_t", _frozen(self.phi_t))
        if self.phi.shape != self.phi_t.shape:
            raise ValueError("phi and phi_t shapes differ")

    @property
    def all_finite(self) -> bool:
        return bool(np.isfinite(self.phi).all() and np.isfinite(self.phi_t).all())


DEFAULT_TOLERANCES: Mapping[str, float] = {
    "boundary_trace": 1e-6,     # |u(0) - N1 pi| and edge traces in validation
    "charge_integer": 0.05,     # allowed deviation of the raw charge ratio
    "quad_y": 1e-11,            # absolute tolerance of the y-quadratures
    "plancherel": 1e-8,         # spectral round-trip tolerance
    "monitor_drift": 2.0,       # allowed factor for calibrated monitor constants
}


@dataclass(frozen=True)
class ModelParams:
    """Run parameters: winding number, domain, resolution, time horizon."""

    n1: int = 1
    r_max: float = 16.0
    n_cells: int = 1024
    cfl: float = 0.4
    t_final: float = 1.0
    s_reg: float = 3.1
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n1 < 0 or int(self.n1) != self.n1:
            raise ValueError("n1 must be a nonnegative integer")
        if not (0.0 < self.cfl < 1.0):
            raise ValueError("cfl must lie in (0, 1)")
        if self.t_final <= 0.0:
            raise ValueError("t_final must be positive")
        if self.s_reg <= 3.0:
            raise ValueError("s_reg must exceed 3")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update(self.tolerances)
        object.__setattr__(self, "tolerances", tol)
        object.__setattr__(self, "n1", int(self.n1))
