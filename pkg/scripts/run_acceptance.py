"""Run the acceptance criteria and print one verdict line per criterion."""
import argparse
import sys
import time

from masure.acceptance import PRESET_NAMES, AcceptanceConfig, run_acceptance, summarize


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--preset", action="append", choices=PRESET_NAMES)
    p.add_argument("--criterion", type=int, action="append")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=200)
    args = p.parse_args()
    start = time.perf_counter()
    results = run_acceptance(args.preset or PRESET_NAMES, AcceptanceConfig(seed=args.seed, pairs=args.pairs), args.criterion)
    for r in results:
        print(f"  [{r.preset}] criterion {r.criterion}: {'PASS' if r.passed else 'FAIL'} ({r.checked} checks)")
    summary = summarize(results)
    for k, row in sorted(summary.items()):
        print(f"criterion {k} {row['name']}: {'PASS' if row['passed'] else 'FAIL'}")
    print(f"total {time.perf_counter() - start:.1f}s")
    return 0 if all(row["passed"] for row in summary.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
