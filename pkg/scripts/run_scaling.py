#!/usr/bin/env python3
"""Scaling study for the average-linkage engines.

Times naive / exact / approx on star graphs (the eager baseline's worst
case) or sparse random graphs over a range of sizes, and prints wall-clock
medians plus the t / (n log^2 n) normalization used by the scaling check."""

from __future__ import annotations

import argparse
import math
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from graphhac.average import approx_avg_hac, exact_avg_hac, naive_avg_hac
from graphhac.instances import random_sparse_graph, star_graph


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--engines", default="naive,approx")
    ap.add_argument("--graph", choices=["star", "random"], default="star")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--epsilon", type=float, default=0.1)
    ap.add_argument("--naive-limit", type=int, default=20000,
                    help="skip the naive engine above this n")
    args = ap.parse_args()

    engines = {
        "naive": naive_avg_hac,
        "exact": lambda g: exact_avg_hac(g),
        "approx": lambda g: approx_avg_hac(g, args.epsilon),
    }
    chosen = [e for e in args.engines.split(",") if e]
    sizes = [int(s) for s in args.sizes.split(",") if s]
    print(f"{'engine':<8} {'n':>8} {'m':>8} {'median_s':>9} {'t/(n lg^2 n)':>13}")
    for n in sizes:
        g = star_graph(n) if args.graph == "star" else random_sparse_graph(0, n)
        for name in chosen:
            if name == "naive" and n > args.naive_limit:
                print(f"{name:<8} {n:>8} {g.m:>8} {'skip':>9}")
                continue
            times = []
            for _ in range(args.reps):
                t0 = time.perf_counter()
                engines[name](g)
                times.append(time.perf_counter() - t0)
            med = statistics.median(times)
            print(f"{name:<8} {n:>8} {g.m:>8} {med:>9.3f} {med / (n * math.log2(n) ** 2):>13.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
