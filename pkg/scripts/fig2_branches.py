"""Real-classical Morse fan: branch split and coverage of final positions.

Writes trajectories.csv (thinned in time) and prints the branch summary.
"""

import argparse
from pathlib import Path

import numpy as np

from complexaction.branches import classify_branches
from complexaction.config import load_config
from complexaction.runs import fan_for, run_propagate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fig2")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    cfg = load_config("fig2")
    run_propagate(cfg, Path(args.out), threads=args.threads)
    fan = fan_for(cfg, threads=args.threads)
    refl, direct, n_div = classify_branches(fan)
    print(f"{len(fan)} trajectories, {n_div} diverged, step-halving error {fan.max_error:.2e}")
    for b in (refl, direct):
        lo, hi = b.x_range
        print(f"  {b.label.value:9s} {len(b):5d} members   x0 in [{b.x0.min():.3f}, {b.x0.max():.3f}]   x_f in [{lo:.3f}, {hi:.3f}]")
    grid = np.linspace(-2.5, 10.0, 1251)
    both = (grid >= max(refl.x_range[0], direct.x_range[0])) & (grid <= min(refl.x_range[1], direct.x_range[1]))
    print(f"grid points in [-2.5, 10] reached by both branches: {both.sum()}/{grid.size}")


if __name__ == "__main__":
    main()
