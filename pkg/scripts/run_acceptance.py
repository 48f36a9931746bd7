#!/usr/bin/env python3
"""Run the acceptance suite and print one pass/fail line per criterion.

Exit status 0 only when every criterion holds at its official trial count;
pass --quick for a fast smoke run with reduced counts.
"""
import argparse
import sys
import time

from reconflab.acceptance import CRITERIA


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true")
    args = parser.parse_args()

    all_ok = True
    t0 = time.time()
    for ident, title, fn in CRITERIA:
        t1 = time.time()
        passed, details = fn(args.quick)
        all_ok &= passed
        status = "PASS" if passed else "FAIL"
        print(f"{status} {ident} [{time.time() - t1:6.1f}s] {title}: {details}", flush=True)
    print(f"{'OK' if all_ok else 'FAILED'} in {time.time() - t0:.1f}s")
    return 0 if all_ok else 1


if __name__ == "__main__":
    sys.exit(main())
