"""Render a run directory into figures and a delimited key-metric table.

Reads summary.json and diagnostics.csv as written by the harness and drops
PNG figures plus report.csv next to them.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_report"]


def _load_rows(path: Path) -> list[dict]:
    with open(path) as fh:
        return [{k: float(v) if v not in ("", "None") else float("nan")
                 for k, v in row.items()} for row in csv.DictReader(fh)]


def _fig(path: Path, xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=(6.0, 3.6), constrained_layout=True)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return fig, ax


def render_report(run_dir: str | Path) -> list[Path]:
    run_dir = Path(run_dir)
    summary_path = run_dir / "summary.json"
    diag_path = run_dir / "diagnostics.csv"
    if not summary_path.exists():
        raise FileNotFoundError(f"no summary.json under {run_dir}")
    with open(summary_path) as fh:
        summary = json.load(fh)
    written: list[Path] = []

    if diag_path.exists():
        rows = _load_rows(diag_path)
        t = [r["t"] for r in rows]

        fig, ax = _fig(run_dir / "energy.png", "t", "energy", "energy components")
        for key, label in (("energy_total", "total"), ("energy_kinetic", "kinetic"),
                           ("energy_gradient", "gradient"), ("energy_potential", "potential")):
            ax.plot(t, [r[key] for r in rows], label=label)
        ax.legend(fontsize=8)
        fig.savefig(run_dir / "energy.png", dpi=130)
        plt.close(fig)
        written.append(run_dir / "energy.png")

        fig, ax = _fig(None, "t", "relative drift", "energy conservation")
        drift = [max(r["energy_drift_rel"], 1e-18) for r in rows]
        ax.semilogy(t, drift)
        fig.savefig(run_dir / "energy_drift.png", dpi=130)
        plt.close(fig)
        written.append(run_dir / "energy_drift.png")

        fig, ax = _fig(None, "t", "sup (1+r)(|v|+|grad v|)", "continuation quantity")
        ax.plot(t, [r["continuation"] for r in rows])
        fig.savefig(run_dir / "continuation.png", dpi=130)
        plt.close(fig)
        written.append(run_dir / "continuation.png")

        fig, ax = _fig(None, "t", "supremum", "decay monitors")
        for key in sorted(rows[0]):
            if key.startswith("monitor_") and key != "monitor_continuation":
                ax.plot(t, [r[key] for r in rows], label=key.removeprefix("monitor_"))
        ax.legend(fontsize=7)
        fig.savefig(run_dir / "monitors.png", dpi=130)
        plt.close(fig)
        written.append(run_dir / "monitors.png")

        fig, ax = _fig(None, "t", "charge ratio", "topological charge")
        ax.plot(t, [r["charge_ratio"] for r in rows], marker=".", lw=0.8)
        fig.savefig(run_dir / "charge.png", dpi=130)
        plt.close(fig)
        written.append(run_dir / "charge.png")

        metrics = {
            "terminal_status": summary.get("terminal_status", ""),
            "energy_drift_max": max(r["energy_drift_rel"] for r in rows),
            "continuation_max": max(r["continuation"] for r in rows),
            "residual_box_phi_final": rows[-1].get("residual_box_phi", float("nan")),
            "charge_final": rows[-1]["charge"],
            "t_final": t[-1],
        }
    else:
        metrics = {k: v for k, v in summary.items()
                   if isinstance(v, (int, float, str)) and k != "config"}

    report_csv = run_dir / "report.csv"
    with open(report_csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["metric", "value"])
        for k, v in metrics.items():
            w.writerow([k, v])
    written.append(report_csv)
    return written
