#!/usr/bin/env python3
"""Measure single-threaded metric throughput on random box pairs."""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from boxmetrics import full_report, iou, v2v
from boxmetrics.oracles import random_box_pair


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=3000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    pairs = [random_box_pair(rng) for _ in range(args.pairs)]
    for a, b in pairs:
        a.corners, b.corners  # exclude one-time per-box caching from the timing

    for name, fn in (("iou", iou), ("v2v", v2v), ("full_report", full_report)):
        start = time.perf_counter()
        for a, b in pairs:
            fn(a, b)
        elapsed = time.perf_counter() - start
        print(f"{name:>12}: {args.pairs / elapsed:10,.0f} pairs/s   ({elapsed / args.pairs * 1e6:7.1f} us/pair)")


if __name__ == "__main__":
    main()
