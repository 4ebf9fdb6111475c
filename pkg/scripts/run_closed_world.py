"""Walk the update sequence of kbs/closed_world.kb and report what each prefix entails.

    python3 scripts/run_closed_world.py            # solver only, about a second
    python3 scripts/run_closed_world.py --brute    # also re-derive every model set by
                                                   # brute force (several minutes)
"""
import argparse
import sys
import time
from pathlib import Path

from hybrid_update import grounder as g
from hybrid_update.solver import atom_status_report, entailment_in, solve

ROOT = Path(__file__).resolve().parent.parent

# literal sets as printed for the closed-world KB
PRINTED = {
    1: ["A(c)", "!A(d)"],
    2: ["!A(c)", "!B(c)", "!A(d)"],
    3: ["A(c)", "!B(c)", "C(c)", "!A(d)", "E(d)", "P(c,d)", "D(d)"],
    4: ["A(c)", "!B(c)", "C(c)", "!A(d)", "E(d)", "E(c)"],
    5: ["A(c)", "!B(c)", "C(c)", "!A(d)", "E(d)", "!E(c)", "!P(c,d)"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--kb", default=str(ROOT / "kbs" / "closed_world.kb"))
    ap.add_argument("--brute", action="store_true", help="cross-check with the brute-force enumerator")
    args = ap.parse_args()

    kb = g.parse_kb(Path(args.kb).read_text())
    problem = g.ground_kb(kb)
    if args.brute:
        sys.path.insert(0, str(ROOT / "tests"))
        from oracles import naive_dynamic_models

    print(f"{len(problem.signature)} atoms, {len(problem.program)} ground rules, {len(problem.tbox)} TBox formulas")
    for k in range(1, len(problem.updates) + 1):
        sub = problem.with_updates(problem.updates[:k])
        t = time.perf_counter()
        result = solve(sub)
        took = time.perf_counter() - t
        print(f"\nafter A1..A{k}: {len(result.models)} model(s) in {took:.2f}s")
        for m in result.models:
            s = atom_status_report(m)
            print(f"  |M| = {s.size}")
            print("  known true: ", ", ".join(map(str, s.known_true)) or "-")
            print("  known false:", ", ".join(map(str, s.known_false)) or "-")
        for lit in PRINTED.get(k, []):
            ok = entailment_in(result, g.parse_formula(lit))
            print(f"  {lit:<8} {'entailed' if ok else 'NOT entailed'}")
        if args.brute:
            t = time.perf_counter()
            same = naive_dynamic_models(sub.program.rules, sub.tbox, sub.updates, sub.signature) == result.world_sets()
            print(f"  brute force agrees: {same} ({time.perf_counter() - t:.0f}s)")


if __name__ == "__main__":
    main()
