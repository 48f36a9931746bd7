#!/usr/bin/env python3
"""Randomized cross-check of the three solving routes.

For seeded random tape instances: the plain exhaustive search, the
bounded-alphabet reduction pipeline, and (for irreducible artifacts) the
token-sliding encoding must all report the same reachability.
"""
import argparse
import random
import sys

from reconflab.dsr import solve
from reconflab.generators import gen_random_tape_instance
from reconflab.reductions import desynchronize_triangle, tape_to_ts_dsr
from reconflab.tape_reduce import solve_bounded_alphabet
from reconflab.tapes import solve_tape


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=50)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    mismatches = 0
    for i in range(args.trials):
        sigma = rng.randint(1, 2)
        plain = gen_random_tape_instance(
            rng.randrange(2**31), tapes=2 * sigma + 1, cells=3, sigma=sigma
        )
        direct = solve_tape(plain).reachable
        reduced = solve_bounded_alphabet(plain).reachable
        sync = gen_random_tape_instance(
            rng.randrange(2**31), tapes=2, cells=3, sigma=sigma, sync=True
        )
        art = desynchronize_triangle(sync)
        tape_side = solve_tape(art).reachable
        token_side = solve(tape_to_ts_dsr(art)).reachable
        ok = (direct == reduced) and (tape_side == token_side)
        mismatches += not ok
        print(f"trial {i:3d}: direct={direct} reduced={reduced} "
              f"tape={tape_side} tokens={token_side} {'ok' if ok else 'MISMATCH'}")
    print(f"{args.trials - mismatches}/{args.trials} consistent")
    return 0 if mismatches == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
