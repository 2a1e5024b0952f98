"""Command-line interface.

    eqfaddeev run      --config cfg.json
    eqfaddeev validate --config cfg.json
    eqfaddeev converge --config cfg.json --levels 3
    eqfaddeev suites   --family radial-sobolev --seed 7
    eqfaddeev report   --input out/run1

Environment overrides: EQFADDEEV_OUTPUT_DIR (output directory),
EQFADDEEV_THREADS (worker/BLAS thread count).  Nothing else is read.
"""

from __future__ import annotations

import argparse
import os
import sys


def _apply_thread_env():
    th = os.environ.get("EQFADDEEV_THREADS")
    if th:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, th)


def main(argv=None) -> int:
    _apply_thread_env()
    parser = argparse.ArgumentParser(prog="eqfaddeev",
                                     description="equivariant Faddeev field simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("run", "validate", "converge"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment config")
        if name == "converge":
            p.add_argument("--levels", type=int, default=None,
                           help="number of refinement levels")

    p = sub.add_parser("suites")
    p.add_argument("--family", default="all",
                   choices=["all", "radial-sobolev", "hardy"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="out/suites")
    p.add_argument("--n-samples", type=int, default=8)

    p = sub.add_parser("report")
    p.add_argument("--input", required=True, help="run directory to render")

    args = parser.parse_args(argv)

    from .harness import (EXIT_CONFIG, ExperimentConfig, load_config,
                          run_experiment)

    try:
        if args.command == "report":
            from .report import render_report
            for path in render_report(args.input):
                print(path)
            return 0

        if args.command == "suites":
            config = ExperimentConfig.from_dict({
                "kind": "suites",
                "output_dir": args.output,
                "seed": args.seed,
                "suites": {"family": args.family, "n_samples": args.n_samples},
            })
        else:
            config = load_config(args.config)
            # `run` also dispatches sweep configs; other commands pin the kind
            allowed = {"run": {"run", "sweep"}}.get(args.command, {args.command})
            if config.kind not in allowed:
                config = ExperimentConfig.from_dict(
                    {**config.to_dict(), "kind": args.command})
            if args.command == "converge" and args.levels is not None:
                config.levels = args.levels
    except (ValueError, KeyError, OSError, TypeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    code, doc = run_experiment(config)
    status = doc.get("terminal_status", doc.get("passed", ""))
    print(f"{config.kind}: exit={code} status={status} -> {config.output_dir}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
