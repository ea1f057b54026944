"""Print Dowker diagrams of cycle networks in dimensions 1 to 3.

    python scripts/cycle_diagrams.py --max-n 8
"""
import argparse
import time

from netpers.validate import cycle_diagram


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=8)
    ap.add_argument("--max-dim", type=int, default=3)
    args = ap.parse_args()
    for n in range(3, args.max_n + 1):
        t0 = time.perf_counter()
        parts = [f"dim {k}: {list(cycle_diagram(n, k))}" for k in range(1, args.max_dim + 1)]
        print(f"n={n:2d}  " + "  ".join(parts) + f"  ({time.perf_counter() - t0:.1f}s)")


if __name__ == "__main__":
    main()
