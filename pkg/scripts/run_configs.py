"""Run every experiment config in scripts/configs and print a coverage table.

    python3 scripts/run_configs.py [--out results/] [--workers N]

The negative control is also run with c1 scaled by 0.01, where violations
are expected.
"""

import argparse
import time
from dataclasses import replace
from pathlib import Path

from falsify.experiment import ExperimentConfig, run_experiment, write_summary, write_trial_log

HERE = Path(__file__).resolve().parent


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    runs = [(p.stem, ExperimentConfig.load(p)) for p in sorted((HERE / "configs").glob("*.*"))]
    neg = dict(runs)["negative_control"]
    runs.append(("negative_control_c1x0.01", replace(neg, c1_scale=0.01)))

    for name, cfg in runs:
        t0 = time.perf_counter()
        summary, records = run_experiment(cfg, workers=args.workers)
        out = args.out / name
        out.mkdir(parents=True, exist_ok=True)
        write_trial_log(records, out / "trials.csv")
        write_summary(summary, cfg, out / "summary.json")
        cells = []
        for kind, b in summary.per_bound.items():
            cov = "n/a" if b.coverage is None else f"{b.coverage:.3f}"
            cells.append(f"{kind}={cov} ({b.violations}/{b.trials})")
        status = "ok" if summary.ok() else "BELOW 1-delta"
        print(f"{name:28s} {time.perf_counter() - t0:6.1f}s  {status:14s} " + "  ".join(cells))


if __name__ == "__main__":
    main()
