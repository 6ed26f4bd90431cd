#!/usr/bin/env python3
"""Differential sweep: exact metrics against the sampling oracles.

Configurable, smaller-or-larger version of the acceptance criterion runs.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from boxmetrics import OracleConfig, intersection_volume, iou, mc_iou, sampled_v2v, v2v
from boxmetrics.oracles import random_box_pair, surface_cell_diagonal


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=100, help="random pairs for the IoU sweep")
    parser.add_argument("--disjoint-pairs", type=int, default=50, help="disjoint pairs for the v2v sweep")
    parser.add_argument("--samples", type=int, default=200_000, help="Monte-Carlo samples per pair")
    parser.add_argument("--grid", type=int, default=32, help="surface lattice resolution")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    worst_gap = 0.0
    worst_sigmas = 0.0
    for index in range(args.pairs):
        a, b = random_box_pair(rng)
        cfg = OracleConfig(sample_count=args.samples, seed=index, grid_res=args.grid)
        estimate, std_error = mc_iou(a, b, cfg)
        gap = abs(iou(a, b) - estimate)
        worst_gap = max(worst_gap, gap)
        if std_error > 0.0:
            worst_sigmas = max(worst_sigmas, gap / std_error)
    print(f"iou vs mc_iou over {args.pairs} pairs: worst gap {worst_gap:.6f} ({worst_sigmas:.2f} sigma)")

    checked = 0
    worst_ratio = 0.0
    while checked < args.disjoint_pairs:
        a, b = random_box_pair(rng)
        if intersection_volume(a, b) > 0.0:
            continue
        checked += 1
        cfg = OracleConfig(sample_count=1, seed=0, grid_res=args.grid)
        gap = sampled_v2v(a, b, cfg) - v2v(a, b)
        bound = 2.0 * max(surface_cell_diagonal(a, args.grid), surface_cell_diagonal(b, args.grid))
        if gap < 0.0:
            print(f"  VIOLATION: sampled below exact by {-gap:.3g}")
        worst_ratio = max(worst_ratio, gap / bound)
    print(f"sampled_v2v over {checked} disjoint pairs: worst gap/bound ratio {worst_ratio:.3f}")


if __name__ == "__main__":
    main()
