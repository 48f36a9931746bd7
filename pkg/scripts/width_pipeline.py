#!/usr/bin/env python3
"""Walk a partitioned jumping instance through the full hardness pipeline and
verify the explicit width certificates at every stage.

The chain is: partitioned token jumping -> synchronized subdivided stars
(1-structured treewidth 3, 2-structured pathwidth 5) -> triangle
desynchronization (+3s+3) -> token sliding (+s+1).  The end-to-end budgets
come out at treewidth 12 and pathwidth 18, and this script checks the derived
decompositions against the actual graphs rather than trusting the arithmetic.
"""
import argparse
import sys

from reconflab.decomposition import verify_decomposition
from reconflab.dsr import solve
from reconflab.generators import gen_partitioned_instance
from reconflab.reductions import desynchronize_triangle, partitioned_dsr_to_sync_stars, tape_to_ts_dsr
from reconflab.tapes import extended_graph, solve_tape
from reconflab.widths import derive_decomposition


def stage(name, graph, artifact, s, budget_tree, budget_path):
    tree = derive_decomposition(artifact, "tree")
    path = derive_decomposition(artifact, "path")
    rt = verify_decomposition(graph, tree, s=s)
    rp = verify_decomposition(graph, path, s=s + 1)
    assert rt.valid and rp.valid, f"{name}: invalid decomposition"
    print(f"  {name}: tree width {rt.width} (budget {budget_tree}, "
          f"{s}-structured={rt.structured}), path width {rp.width} (budget {budget_path})")
    assert rt.width <= budget_tree and rp.width <= budget_path
    return rt.width, rp.width


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=2)
    parser.add_argument("--n", type=int, default=5)
    parser.add_argument("--k", type=int, default=2)
    args = parser.parse_args()

    inst = gen_partitioned_instance(args.seed, n_max=args.n, k_max=args.k)
    print(f"partitioned instance: n={inst.graph.n}, k={inst.k}, "
          f"reachable={solve(inst).reachable}")

    stars = partitioned_dsr_to_sync_stars(inst)
    print(f"stars artifact: {len(stars.tapes)} tapes, alphabet {stars.sigma}, "
          f"modulus {stars.r}, reachable={solve_tape(stars).reachable}")
    stage("stars", extended_graph(stars), stars, s=1, budget_tree=3, budget_path=5)

    desynced = desynchronize_triangle(stars)
    print(f"desynchronized: {len(desynced.tapes)} tapes, alphabet {desynced.sigma}, "
          f"reachable={solve_tape(desynced).reachable}")
    stage("triangle", extended_graph(desynced), desynced, s=2,
          budget_tree=3 + 3 * 1 + 3, budget_path=5 + 3 * 2 + 3)

    sliding = tape_to_ts_dsr(desynced)
    print(f"sliding instance: n={sliding.graph.n}, tokens={sliding.k}, "
          f"reachable={solve(sliding).reachable}")
    tree = derive_decomposition(sliding, "tree")
    path = derive_decomposition(sliding, "path")
    rt = verify_decomposition(sliding.graph, tree)
    rp = verify_decomposition(sliding.graph, path)
    assert rt.valid and rp.valid
    print(f"  sliding: tree width {rt.width} (budget 12), path width {rp.width} (budget 18)")
    assert rt.width <= 12 and rp.width <= 18

    answers = {solve(inst).reachable, solve_tape(stars).reachable,
               solve_tape(desynced).reachable, solve(sliding).reachable}
    assert len(answers) == 1, "the pipeline changed the answer somewhere"
    print("all four stages agree on reachability; width budgets verified")
    return 0


if __name__ == "__main__":
    sys.exit(main())
