"""Sweep master seeds and report how often 0-hole and 4-hole arenas separate.

Shows how noisy the desk-scale separation statistic is from seed to seed.

    python scripts/separation_sweep.py --seeds 0 10
"""
import argparse

from netpers.hippocampus import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, nargs=2, default=(0, 10), metavar=("FIRST", "STOP"))
    ap.add_argument("--snap", type=float)
    args = ap.parse_args()
    wins = 0
    seeds = range(*args.seeds)
    for s in seeds:
        res = run_experiment(ExperimentConfig(master_seed=s, hole_counts=(0, 4), snap=args.snap))
        w, b = res.class_separation(0, 4)
        wins += w < b
        print(f"seed {s:3d}  within {w:.5f}  between {b:.5f}  relative gap {(b - w) / b:+.3f}")
    print(f"separated on {wins}/{len(seeds)} seeds")


if __name__ == "__main__":
    main()
