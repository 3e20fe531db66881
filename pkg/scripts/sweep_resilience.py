"""Resilient-supervisor decisions on seeded random acyclic plants.

Prints the outcome split, structure sizes and timing per bound.
"""
import argparse
import random
import statistics
import time

from des_sentinel.randgen import resilience_instance
from des_sentinel.resilience import decide_resilient


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bounds", default="1,2")
    ap.add_argument("--max-states", type=int, default=5)
    args = ap.parse_args()

    for n in (int(b) for b in args.bounds.split(",")):
        rng = random.Random(args.seed)
        exists, sizes, times = 0, [], []
        for _ in range(args.count):
            g, d = resilience_instance(rng, max_x=args.max_states)
            t0 = time.perf_counter()
            dec = decide_resilient(g, d, n)
            times.append(time.perf_counter() - t0)
            exists += dec.exists
            sizes.append(dec.stats.get("hh_states", 0))
        print(f"n={n}: exists {exists}/{args.count}  "
              f"median |H| {statistics.median(sizes):.0f}  max |H| {max(sizes)}  "
              f"mean {1000 * statistics.mean(times):.1f} ms  max {1000 * max(times):.1f} ms")


if __name__ == "__main__":
    main()
