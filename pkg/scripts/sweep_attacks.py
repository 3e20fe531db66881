"""Attack synthesis on seeded random instances.

Reports how often a risky pair exists, the length of the shortest one and
how long the search took.
"""
import argparse
import collections
import random
import time

from des_sentinel.attack import check_smart_attack
from des_sentinel.attack_synth import find_risky_pair, pair_attack
from des_sentinel.randgen import attack_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bound", type=int, default=1)
    ap.add_argument("--max-states", type=int, default=4)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lengths = collections.Counter()
    not_smart = 0
    t0 = time.perf_counter()
    for _ in range(args.count):
        g, v, d = attack_instance(rng, max_x=args.max_states)
        pair = find_risky_pair(g, v, d, args.bound)
        if pair is None:
            lengths[None] += 1
            continue
        lengths[len(pair.s)] += 1
        if not check_smart_attack(g, v, pair_attack(g, pair), d).smart:
            not_smart += 1
    elapsed = time.perf_counter() - t0

    print(f"instances: {args.count}  bound: {args.bound}  time: {elapsed:.2f}s")
    print(f"no risky pair: {lengths.pop(None, 0)}")
    for k in sorted(lengths):
        print(f"shortest |s| = {k}: {lengths[k]}")
    print(f"synthesized attacks that are not smart: {not_smart}")


if __name__ == "__main__":
    main()
