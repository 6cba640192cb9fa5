#!/usr/bin/env python3
"""Evaluation-time subset averaging for the sign-flip-invariant MLP task.

Default scale is 5e4 train/test samples, 500 epochs, subset sizes
2^0..2^10; pass --quick for a laptop-scale run.
"""

import argparse
from pathlib import Path

from groupavg.experiments.mlp import MlpConfig, epoch_csv, mlp_experiment, subset_csv
from groupavg.io import write_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results/mlp")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--quick", action="store_true", help="1e4 samples, 100 epochs")
    args = ap.parse_args()

    if args.quick:
        cfg = MlpConfig(n_train=10_000, n_test=10_000, epochs=100, seed=args.seed)
    else:
        cfg = MlpConfig(seed=args.seed)
    result = mlp_experiment(cfg)
    out = Path(args.out)
    write_text(out / "loss_vs_subset.csv", subset_csv(result))
    write_text(out / "loss_vs_epoch.csv", epoch_csv(result))
    for size in sorted(result.loss_by_subset):
        print(f"|S| = {size:>5}: test loss {result.loss_by_subset[size]:.6f}")


if __name__ == "__main__":
    main()
