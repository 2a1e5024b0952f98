"""Experiment orchestration and persistence.

Configs are plain JSON documents mirroring ExperimentConfig field names.
Every artifact is written atomically (write-then-rename):

  summary.json      one fixed-field-order document per experiment
  diagnostics.csv   per-checkpoint time series (header row)
  fields/*.bin      optional float64 little-endian snapshots + JSON sidecars

Exit-code contract: 0 success, 2 validation failure, 3 blow-up detected,
4 NaN detected, 5 config error.
"""

from __future__ import annotations

import csv
import json
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (inequality_suite_hardy, inequality_suite_radial_sobolev,
                       validate_initial_data)
from .cutoffs import build_cutoffs
from .fields import ModelParams, UState
from .grid import l2_norm, make_grid
from .model import v_from_u
from .profiles import initial_data_registry
from .solver import (SolverConfig, evolve, manufactured_forcing,
                     manufactured_state)

__all__ = ["ExperimentConfig", "RunSummary", "run_experiment", "load_config",
           "SUMMARY_SCHEMA",
           "EXIT_OK", "EXIT_VALIDATION", "EXIT_BLOWUP", "EXIT_NAN", "EXIT_CONFIG"]

# published schema of run-kind summary.json documents (draft 2020-12)
SUMMARY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "kind", "config"],
    "properties": {
        "version": {"type": "string"},
        "kind": {"enum": ["run", "validate", "converge", "suites", "sweep"]},
        "terminal_status": {"enum": ["completed", "blowup_detected",
                                     "nan_detected", "validation_failed"]},
        "final_diagnostics": {"type": "object"},
        "max_continuation": {"type": "number"},
        "energy_drift": {"type": "number"},
        "charge_history": {
            "type": "array",
            "items": {"type": "array", "prefixItems": [
                {"type": "number"}, {"type": "integer"}, {"type": "number"}]},
        },
        "passed": {"type": "boolean"},
        "checks": {"type": "object"},
        "spatial_order": {"type": "number"},
        "temporal_order": {"type": "number"},
        "results": {"type": "object"},
        "runs": {"type": "array"},
        "extra": {"type": "object"},
        "config": {"type": "object"},
    },
    "additionalProperties": False,
}

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BLOWUP = 3
EXIT_NAN = 4
EXIT_CONFIG = 5

_STATUS_EXIT = {"completed": EXIT_OK, "blowup_detected": EXIT_BLOWUP,
                "nan_detected": EXIT_NAN}


@dataclass
class ExperimentConfig:
    kind: str = "run"
    model: ModelParams = field(default_factory=ModelParams)
    solver: SolverConfig = field(default_factory=SolverConfig)
    data_profile: dict = field(default_factory=lambda: {"name": "plateau", "params": {}})
    output_dir: str = "out"
    seed: int = 0
    snapshots: bool = False
    levels: int = 3
    sweep: list = field(default_factory=list)
    suites: dict = field(default_factory=lambda: {"family": "all", "n_samples": 8})

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {"kind", "model", "solver", "data_profile", "output_dir", "seed",
                 "snapshots", "levels", "sweep", "suites"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        kw = dict(doc)
        if "model" in kw:
            kw["model"] = ModelParams(**kw["model"])
        if "solver" in kw:
            kw["solver"] = SolverConfig(**kw["solver"])
        cfg = cls(**kw)
        if cfg.kind not in ("run", "validate", "converge", "sweep", "suites"):
            raise ValueError(f"unknown experiment kind {cfg.kind!r}")
        if cfg.data_profile.get("name") is None:
            raise ValueError("data_profile.name is required")
        return cfg

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "model": asdict(self.model),
            "solver": asdict(self.solver),
            "data_profile": self.data_profile,
            "output_dir": self.output_dir,
            "seed": self.seed,
            "snapshots": self.snapshots,
            "levels": self.levels,
            "sweep": self.sweep,
            "suites": self.suites,
        }


@dataclass
class RunSummary:
    kind: str
    terminal_status: str
    wall_time: float
    final_diagnostics: dict
    max_continuation: float
    energy_drift: float
    charge_history: list
    extra: dict = field(default_factory=dict)

    def to_dict(self, config: ExperimentConfig) -> dict:
        return {
            "version": __version__,
            "kind": self.kind,
            "terminal_status": self.terminal_status,
            "wall_time": self.wall_time,
            "final_diagnostics": self.final_diagnostics,
            "max_continuation": self.max_continuation,
            "energy_drift": self.energy_drift,
            "charge_history": self.charge_history,
            "extra": self.extra,
            "config": config.to_dict(),
        }


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_dict(json.load(fh))


def _atomic_write(path: Path, data: str | bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    mode = "wb" if isinstance(data, bytes) else "w"
    with open(tmp, mode) as fh:
        fh.write(data)
    os.replace(tmp, path)


def _write_json(path: Path, doc: dict):
    _atomic_write(path, json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _write_summary(outdir: Path, doc: dict):
    """summary.json stays bitwise-deterministic for identical config+seed;
    wall-clock timings go to a sidecar."""
    clean = {k: v for k, v in doc.items() if k != "wall_time"}
    _write_json(outdir / "summary.json", clean)
    if "wall_time" in doc:
        _write_json(outdir / "timing.json", {"wall_time": doc["wall_time"]})


def _write_csv(path: Path, rows: list[dict]):
    if not rows:
        return
    header = list(rows[0].keys())
    import io
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header)
    w.writeheader()
    w.writerows(rows)
    _atomic_write(path, buf.getvalue())


def _write_snapshot(outdir: Path, name: str, arr: np.ndarray, grid, t: float):
    data = np.ascontiguousarray(arr, dtype="<f8")
    _atomic_write(outdir / f"{name}.bin", data.tobytes())
    _write_json(outdir / f"{name}.json", {
        "shape": list(data.shape),
        "dtype": "<f8",
        "t": t,
        "grid": {"r_max": grid.r_max, "n_cells": grid.n_cells, "dr": grid.dr},
    })


def _build_initial_state(config: ExperimentConfig, cut, grid):
    name = config.data_profile["name"]
    params = config.data_profile.get("params", {})
    u0, u1 = initial_data_registry(name, params, cut, grid)
    return u0, u1, v_from_u(UState(u=u0, u_t=u1), cut, grid)


# -------------------------------------------------------------- experiments

def _do_run(config: ExperimentConfig, outdir: Path) -> tuple[int, dict]:
    grid = make_grid(config.model)
    cut = build_cutoffs(config.model.n1, grid)
    u0, u1, v0 = _build_initial_state(config, cut, grid)

    report = validate_initial_data(u0, u1, config.model, cut, grid)
    if not report.passed:
        summary = RunSummary(kind="run", terminal_status="validation_failed",
                             wall_time=0.0, final_diagnostics={},
                             max_continuation=np.nan, energy_drift=np.nan,
                             charge_history=[],
                             extra={"validation": report.checks})
        doc = summary.to_dict(config)
        _write_summary(outdir, doc)
        return EXIT_VALIDATION, doc

    rec = evolve(v0, config.model, config.solver, cut=cut, grid=grid,
                 store_states=config.snapshots)
    rows = [d.to_dict() for d in rec.diagnostics]
    _write_csv(outdir / "diagnostics.csv", rows)
    if config.snapshots and rec.states:
        for i, st in enumerate(rec.states):
            _write_snapshot(outdir / "fields", f"v_{i:04d}", st.v, grid, st.t)
            _write_snapshot(outdir / "fields", f"v_t_{i:04d}", st.v_t, grid, st.t)
    summary = RunSummary(
        kind="run",
        terminal_status=rec.terminal_status,
        wall_time=rec.wall_time,
        final_diagnostics=rows[-1],
        max_continuation=max(d.continuation for d in rec.diagnostics),
        energy_drift=max(d.energy_drift_rel for d in rec.diagnostics),
        charge_history=[[d.t, d.charge, d.charge_ratio] for d in rec.diagnostics],
    )
    doc = summary.to_dict(config)
    _write_summary(outdir, doc)
    return _STATUS_EXIT[rec.terminal_status], doc


def _do_validate(config: ExperimentConfig, outdir: Path) -> tuple[int, dict]:
    grid = make_grid(config.model)
    cut = build_cutoffs(config.model.n1, grid)
    u0, u1, _ = _build_initial_state(config, cut, grid)
    report = validate_initial_data(u0, u1, config.model, cut, grid)
    doc = {
        "version": __version__,
        "kind": "validate",
        "passed": report.passed,
        "checks": report.checks,
        "config": config.to_dict(),
    }
    _write_summary(outdir, doc)
    return (EXIT_OK if report.passed else EXIT_VALIDATION), doc


def _fit_order(hs, errs) -> float:
    hs = np.asarray(hs, dtype=float)
    errs = np.asarray(errs, dtype=float)
    keep = errs > 0
    return float(np.polyfit(np.log(hs[keep]), np.log(errs[keep]), 1)[0])


def manufactured_convergence(config: ExperimentConfig, levels: int) -> dict:
    """Forced-problem convergence study: spatial (dr and dt refined together)
    and temporal (dt alone, self-convergence against a dt/4 reference)."""
    base = config.model
    rows = []
    errs, hs = [], []
    for i in range(levels):
        n = base.n_cells * 2**i
        params = ModelParams(n1=base.n1, r_max=base.r_max, n_cells=n,
                             cfl=base.cfl, t_final=base.t_final, s_reg=base.s_reg)
        grid = make_grid(params)
        cut = build_cutoffs(params.n1, grid)
        forcing = manufactured_forcing(cut, grid)
        v0 = manufactured_state(0.0, grid)
        solver = SolverConfig(cfl=config.solver.cfl, space_op=config.solver.space_op,
                              checkpoint_stride=10**9,
                              blowup_threshold=config.solver.blowup_threshold)
        rec = evolve(v0, params, solver, cut=cut, grid=grid, forcing=forcing,
                     with_residual=False)
        exact = manufactured_state(rec.final_state.t, grid)
        err = l2_norm(rec.final_state.v - exact.v, grid, 4)
        rows.append({"study": "spatial", "n_cells": n, "dt": solver.dt(grid), "error": err})
        errs.append(err)
        hs.append(grid.dr)
    spatial_order = _fit_order(hs, errs)

    n_fine = base.n_cells * 2 ** (levels - 1)
    params = ModelParams(n1=base.n1, r_max=base.r_max, n_cells=n_fine,
                         cfl=base.cfl, t_final=base.t_final, s_reg=base.s_reg)
    grid = make_grid(params)
    cut = build_cutoffs(params.n1, grid)
    forcing = manufactured_forcing(cut, grid)

    def run_dt(cfl):
        solver = SolverConfig(cfl=cfl, space_op=config.solver.space_op,
                              checkpoint_stride=10**9)
        rec = evolve(manufactured_state(0.0, grid), params, solver, cut=cut,
                     grid=grid, forcing=forcing, with_residual=False)
        return rec.final_state.v

    cfl0 = config.solver.cfl
    ref = run_dt(cfl0 / 2 ** (levels + 1))
    terrs, tdts = [], []
    for j in range(levels):
        cfl = cfl0 / 2**j
        vj = run_dt(cfl)
        err = l2_norm(vj - ref, grid, 4)
        rows.append({"study": "temporal", "n_cells": n_fine,
                     "dt": cfl * grid.dr, "error": err})
        terrs.append(err)
        tdts.append(cfl * grid.dr)
    temporal_order = _fit_order(tdts, terrs)
    return {"spatial_order": spatial_order, "temporal_order": temporal_order,
            "rows": rows}


def _do_converge(config: ExperimentConfig, outdir: Path) -> tuple[int, dict]:
    study = manufactured_convergence(config, config.levels)
    _write_csv(outdir / "convergence.csv", study["rows"])
    doc = {
        "version": __version__,
        "kind": "converge",
        "spatial_order": study["spatial_order"],
        "temporal_order": study["temporal_order"],
        "config": config.to_dict(),
    }
    _write_summary(outdir, doc)
    return EXIT_OK, doc


def _do_suites(config: ExperimentConfig, outdir: Path) -> tuple[int, dict]:
    grid = make_grid(config.model)
    family = config.suites.get("family", "all")
    n_samples = int(config.suites.get("n_samples", 8))
    results = {}
    if family in ("all", "radial-sobolev"):
        results["radial_sobolev"] = inequality_suite_radial_sobolev(
            grid, seed=config.seed, n_samples=n_samples)
    if family in ("all", "hardy"):
        results["hardy"] = inequality_suite_hardy(grid, seed=config.seed,
                                                  n_samples=n_samples)
    if not results:
        raise ValueError(f"unknown suite family {family!r}")
    passed = all(v.get("passed", False) for v in results.values())
    doc = {
        "version": __version__,
        "kind": "suites",
        "passed": passed,
        "results": results,
        "config": config.to_dict(),
    }
    _write_summary(outdir, doc)
    return (EXIT_OK if passed else EXIT_VALIDATION), doc


def _do_sweep(config: ExperimentConfig, outdir: Path) -> tuple[int, dict]:
    if not config.sweep:
        raise ValueError("sweep experiment needs a non-empty 'sweep' list of profiles")
    statuses = []
    worst = EXIT_OK
    for i, profile in enumerate(config.sweep):
        sub = ExperimentConfig.from_dict({**config.to_dict(), "kind": "run",
                                          "data_profile": profile, "sweep": [],
                                          "output_dir": str(outdir / f"sweep_{i:03d}")})
        code, doc = _do_run(sub, outdir / f"sweep_{i:03d}")
        statuses.append({"profile": profile, "exit_code": code,
                         "terminal_status": doc.get("terminal_status")})
        worst = max(worst, code)
    doc = {
        "version": __version__,
        "kind": "sweep",
        "runs": statuses,
        "config": config.to_dict(),
    }
    _write_summary(outdir, doc)
    return worst, doc


def run_experiment(config: ExperimentConfig) -> tuple[int, dict]:
    """Dispatch one experiment; returns (exit_code, summary document)."""
    outdir = Path(os.environ.get("EQFADDEEV_OUTPUT_DIR", "") or config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if config.kind == "run":
        code, doc = _do_run(config, outdir)
    elif config.kind == "validate":
        code, doc = _do_validate(config, outdir)
    elif config.kind == "converge":
        code, doc = _do_converge(config, outdir)
    elif config.kind == "suites":
        code, doc = _do_suites(config, outdir)
    elif config.kind == "sweep":
        code, doc = _do_sweep(config, outdir)
    else:
        raise ValueError(f"unknown experiment kind {config.kind!r}")
    doc.setdefault("wall_time", time.perf_counter() - t0)
    return code, doc
