"""Run the bundled examples and print what each pipeline stage produces."""
import argparse
import json

from des_sentinel import io
from des_sentinel.attack import check_smart_attack
from des_sentinel.attack_synth import find_risky_pair, pair_attack
from des_sentinel.fixtures import EXAMPLES
from des_sentinel.resilience import decide_resilient, verify_resilient


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=1)
    ap.add_argument("--dot", help="directory to write DOT files into")
    args = ap.parse_args()

    for name, make in EXAMPLES.items():
        ex = make()
        print(f"== {name}")
        if ex.supervisor is not None:
            pair = find_risky_pair(ex.plant, ex.supervisor, ex.damage, args.bound, strict=False)
            if pair is None:
                print("  given supervisor: no risky pair")
            else:
                a = pair_attack(ex.plant, pair)
                verdict = check_smart_attack(ex.plant, ex.supervisor, a, ex.damage)
                print(f"  given supervisor: risky pair {json.dumps(pair.as_dict())}, smart={verdict.smart}")
                if args.dot:
                    with open(f"{args.dot}/{name}_attack.dot", "w") as fh:
                        fh.write(io.transducer_to_dot(a, f"{name}_attack"))
        dec = decide_resilient(ex.plant, ex.damage, args.bound)
        print(f"  decision: {dec.outcome}  stats={dec.stats}")
        if dec.exists:
            print(f"  supervisor: {json.dumps(io.supervisor_to_json(dec.supervisor, ex.alphabet))}")
            print(f"  re-verified: {verify_resilient(ex.plant, dec.supervisor, ex.damage, args.bound).ok}")
            if args.dot:
                data = io.supervisor_to_json(dec.supervisor, ex.alphabet)
                with open(f"{args.dot}/{name}_supervisor.dot", "w") as fh:
                    fh.write(io.artifact_to_dot(data, f"{name}_supervisor"))


if __name__ == "__main__":
    main()
