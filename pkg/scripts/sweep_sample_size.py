"""Bound totals and true risk as the sample grows, for plotting.

    python3 scripts/sweep_sample_size.py --config scripts/configs/thresholds_distinct_heavy.toml \
        --sizes 5 10 20 30 60 --trials 200 --out sweep.csv

Writes one row per (bound, l): mean bound total and mean true risk over
the applicable trials.
"""

import argparse
import csv
from dataclasses import replace
from pathlib import Path

from falsify.experiment import ExperimentConfig, plot_rows, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--config", type=Path, required=True)
    ap.add_argument("--sizes", type=int, nargs="+", default=[5, 10, 20, 30])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("sweep.csv"))
    args = ap.parse_args()

    base = ExperimentConfig.load(args.config)
    rows = []
    for l in args.sizes:
        cfg = replace(base, l=l, trials=args.trials)
        _, records = run_experiment(cfg, workers=args.workers)
        rows.extend(plot_rows(records, l))
        print(f"l={l:4d} done")
    with open(args.out, "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]))
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {args.out}")


if __name__ == "__main__":
    main()
