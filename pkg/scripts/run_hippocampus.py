"""Run the place-cell classification experiment and print the class separation.

    python scripts/run_hippocampus.py --scale desk --seed 0 --out runs/desk
    python scripts/run_hippocampus.py --scale full --seed 0 --jobs 4 --out runs/full
"""
import argparse
import logging

import numpy as np

from netpers.hippocampus import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", choices=["desk", "full"], default="desk")
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out")
    ap.add_argument("--method", choices=["dowker", "rips"], default="dowker")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    make = ExperimentConfig.full_scale if args.scale == "full" else ExperimentConfig
    cfg = make(master_seed=args.seed, jobs=args.jobs, method=args.method)
    res = run_experiment(cfg, args.out)
    holes = np.array([t.n_holes for t in res.trials])
    d = res.matrix.d
    print(f"{len(res.trials)} trials, {res.seconds:.1f}s")
    print("mean bottleneck distance between hole classes:")
    print("     " + "".join(f"{h:>9d}" for h in cfg.hole_counts))
    for a in cfg.hole_counts:
        row = []
        for b in cfg.hole_counts:
            block = d[np.ix_(holes == a, holes == b)]
            if a == b:
                block = block[np.triu_indices(len(block), 1)]
            row.append(block.mean() if block.size else float("nan"))
        print(f"{a:>5d}" + "".join(f"{v:9.4f}" for v in row))
    w, b = res.class_separation(0, 4)
    print(f"0 vs 4 holes: within {w:.5f}  between {b:.5f}  separated: {w < b}")


if __name__ == "__main__":
    main()
