"""Run every harness property and print a one-line summary each.

    python3 scripts/run_properties.py --trials 500 --seed 3 --atoms 6
"""
import argparse
import sys
import time

from hybrid_update.harness import PROPERTY_NAMES, InstanceConfig, check_property


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--atoms", type=int, default=5)
    ap.add_argument("--rules", type=int, default=6)
    ap.add_argument("--neg-prob", type=float, default=0.4)
    ap.add_argument("--updates", type=int, default=2)
    args = ap.parse_args()
    cfg = InstanceConfig(
        atoms=args.atoms, rules=args.rules, neg_prob=args.neg_prob, updates=args.updates, seed=args.seed,
    )
    bad = 0
    for name in PROPERTY_NAMES:
        t = time.perf_counter()
        report = check_property(name, cfg, args.trials)
        print(f"{name:<24} {report.instances:>5} instances  {len(report.failures)} failures  "
              f"{time.perf_counter() - t:6.1f}s")
        if not report.ok:
            bad += 1
            print(report.format_text())
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
