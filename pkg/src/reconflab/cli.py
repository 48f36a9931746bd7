"""Command-line surface: thin shells around the library operations.

Deterministic JSON goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 negative verification, 2 malformed input, 3 cap exceeded.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys

from . import serialize
from .dsr import DEFAULT_STATE_CAP, DsrInstance, solve, verify_witness
from .errors import (
    InfeasibleInstance,
    MalformedInput,
    RetryBudgetExceeded,
    SizeCapExceeded,
    StateCapExceeded,
    WorkbenchError,
)
from .generators import gen_random_graph, gen_random_tape_instance
from .graphs import Graph, dominates
from .kernel import DcrInstance, kernelize as run_kernelize, solve_dcr
from .reductions import (
    NormalizedFormula,
    desynchronize_path,
    desynchronize_triangle,
    ds_to_sync_multi,
    formula_to_multi,
    partitioned_dsr_to_sync_stars,
    select_from_tuples,
    tape_to_tj_cdsr,
    tape_to_ts_dsr,
    weighted_satisfiable,
)
from .tapes import MultiTapeInstance, TapeInstance, solve_multi, solve_tape
from .tape_reduce import reduce_tapes_fully

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_MALFORMED = 2
EXIT_CAP = 3


def _load(path: str):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path} is not valid JSON: {exc}") from exc
    return serialize.decode(doc)


def _emit(payload: dict) -> None:
    sys.stdout.write(serialize.canonical_dumps(payload))


# ---------------------------------------------------------------------------
# subcommands

def _cmd_solve(args) -> int:
    inst = _load(args.instance)
    if isinstance(inst, DcrInstance):
        res = solve_dcr(inst, args.state_cap)
    elif isinstance(inst, DsrInstance):
        res = solve(inst, args.state_cap)
    else:
        raise MalformedInput("solve expects a dsr-instance or dcr-instance")
    out = {"kind": "solve-result", "version": 1, "reachable": res.reachable,
           "explored": res.explored}
    if res.witness is not None:
        out["witnessLength"] = len(res.witness) - 1
        if args.witness:
            out["witness"] = [sorted(c) for c in res.witness]
    _emit(out)
    return EXIT_OK


def _cmd_solve_tape(args) -> int:
    inst = _load(args.instance)
    if isinstance(inst, TapeInstance):
        res = solve_tape(inst, args.state_cap)
        out = {"kind": "solve-result", "version": 1, "reachable": res.reachable,
               "explored": res.explored}
        if res.witness is not None:
            out["witnessLength"] = len(res.witness) - 1
            if args.witness:
                out["witness"] = [list(c) for c in res.witness]
    elif isinstance(inst, MultiTapeInstance):
        res = solve_multi(inst, args.state_cap)
        out = {"kind": "solve-result", "version": 1, "positive": res.positive}
        if res.selection is not None:
            out["selection"] = list(res.selection)
    else:
        raise MalformedInput("solve-tape expects a tape or multi-tape instance")
    _emit(out)
    return EXIT_OK


_REDUCE_ROUTES = {
    ("graph", "sync-multi"): "needs_k",
    ("dsr-instance", "sync-stars"): partitioned_dsr_to_sync_stars,
    ("tape-instance", "tape"): desynchronize_triangle,
    ("tape-instance", "path-tape"): desynchronize_path,
    ("multi-tape-instance", "path-tape"): select_from_tuples,
    ("tape-instance", "ts-dsr"): tape_to_ts_dsr,
    ("tape-instance", "tj-cdsr"): tape_to_tj_cdsr,
    ("formula", "multi-tape"): "needs_k",
}


def _cmd_reduce(args) -> int:
    inst = _load(args.instance)
    kind = serialize.encode(inst)["kind"] if not isinstance(inst, Graph) else "graph"
    if isinstance(inst, NormalizedFormula):
        kind = "formula"
    if args.src is not None and args.src != kind:
        raise MalformedInput(f"input is a {kind}, not a {args.src}")
    route = _REDUCE_ROUTES.get((kind, args.dst))
    if route is None:
        raise MalformedInput(f"no reduction from {kind} to {args.dst}")
    if route == "needs_k":
        if args.k is None:
            raise MalformedInput("this reduction needs --k")
        out = (ds_to_sync_multi(inst, args.k) if kind == "graph"
               else formula_to_multi(inst, args.k))
    else:
        out = route(inst)
    doc = serialize.encode(out)
    prov = getattr(out, "provenance", None) or {}
    doc["provenance"] = {
        key: val for key, val in prov.items()
        if isinstance(val, (str, int, list, tuple))
    }
    _emit(doc)
    return EXIT_OK


def _cmd_reduce_tapes(args) -> int:
    inst = _load(args.instance)
    if not isinstance(inst, TapeInstance):
        raise MalformedInput("reduce-tapes expects a tape instance")
    reduced, log = reduce_tapes_fully(inst)
    doc = serialize.encode(reduced)
    doc["reductionLog"] = log
    _emit(doc)
    return EXIT_OK


def _cmd_kernelize(args) -> int:
    inst = _load(args.instance)
    if not isinstance(inst, DcrInstance):
        raise MalformedInput("kernelize expects a dcr-instance")
    kernel, report = run_kernelize(inst)
    doc = serialize.encode(kernel)
    doc["certificate"] = {
        "coreSize": report.core_size,
        "classHistogram": {str(t): sizes for t, sizes in sorted(report.class_histogram.items())},
        "rulesApplied": list(report.rules_applied),
        "sizeBefore": list(report.size_before),
        "sizeAfter": list(report.size_after),
        "certified": report.certified,
    }
    _emit(doc)
    return EXIT_OK


def _cmd_verify_witness(args) -> int:
    inst = _load(args.instance)
    configs = _load(args.witness)
    if isinstance(inst, DcrInstance):
        from .kernel import as_dsr

        inst = as_dsr(inst)
    if not isinstance(inst, DsrInstance):
        raise MalformedInput("verify-witness expects a dsr or dcr instance")
    ok = verify_witness(inst, configs)
    _emit({"kind": "verification", "version": 1, "valid": ok})
    return EXIT_OK if ok else EXIT_NEGATIVE


def _verify_dominating_set(inst, k, cap):
    multi = ds_to_sync_multi(inst, k)
    positive = solve_multi(multi, cap).positive
    expected = any(
        dominates(inst, set(c), range(inst.n))
        for c in itertools.combinations(range(inst.n), k)
    )
    return positive == expected


def _cmd_verify_reduction(args) -> int:
    inst = _load(args.instance)
    name = args.construction
    cap = args.state_cap
    if name == "dominating-set":
        if not isinstance(inst, Graph) or args.k is None:
            raise MalformedInput("dominating-set verification needs a graph and --k")
        agree = _verify_dominating_set(inst, args.k, cap)
    elif name == "sync-stars":
        agree = solve_tape(partitioned_dsr_to_sync_stars(inst), cap).reachable == \
            solve(inst, cap).reachable
    elif name == "triangle":
        agree = solve_tape(desynchronize_triangle(inst), cap).reachable == \
            solve_tape(inst, cap).reachable
    elif name == "path":
        agree = solve_tape(desynchronize_path(inst), cap).reachable == \
            solve_tape(inst, cap).reachable
    elif name == "selector":
        agree = solve_tape(select_from_tuples(inst), cap).reachable == \
            solve_multi(inst, cap).positive
    elif name == "ts-dsr":
        agree = solve(tape_to_ts_dsr(inst), cap).reachable == solve_tape(inst, cap).reachable
    elif name == "tj-cdsr":
        agree = solve(tape_to_tj_cdsr(inst), cap).reachable == solve_tape(inst, cap).reachable
    elif name == "formula":
        if not isinstance(inst, NormalizedFormula) or args.k is None:
            raise MalformedInput("formula verification needs a formula and --k")
        agree = solve_multi(formula_to_multi(inst, args.k), cap).positive == \
            weighted_satisfiable(inst, args.k)
    else:
        raise MalformedInput(f"unknown construction {name!r}")
    _emit({"kind": "verification", "version": 1, "agree": agree})
    return EXIT_OK if agree else EXIT_NEGATIVE


def _cmd_gen(args) -> int:
    if args.what == "graph":
        g = gen_random_graph(args.seed, args.n, args.edge_prob, args.constraint)
        _emit(serialize.graph_to_json(g))
    else:
        inst = gen_random_tape_instance(
            args.seed, args.tapes, args.cells, args.sigma, args.sync
        )
        _emit(serialize.tape_instance_to_json(inst))
    return EXIT_OK


def _cmd_acceptance(args) -> int:
    from .acceptance import run_all

    results = run_all(quick=args.quick, log=sys.stderr, trials=args.trials)
    _emit({
        "kind": "acceptance-report",
        "version": 1,
        "results": [
            {"criterion": r.ident, "title": r.title, "passed": r.passed,
             "details": r.details}
            for r in results
        ],
        "allPassed": all(r.passed for r in results),
    })
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reconflab",
        description="Exact solvers and oracle-verified reductions for "
                    "dominating-set and head-on-tape reconfiguration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cap(p):
        p.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP,
                       help="abort searches beyond this many configurations")

    p = sub.add_parser("solve", help="reachability for a (core) domination instance")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true", help="include the move sequence")
    add_cap(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("solve-tape", help="reachability for a tape or multi-tape instance")
    p.add_argument("instance")
    p.add_argument("--witness", action="store_true")
    add_cap(p)
    p.set_defaults(func=_cmd_solve_tape)

    p = sub.add_parser("reduce", help="apply an instance transformation")
    p.add_argument("instance")
    p.add_argument("--from", dest="src", default=None, help="expected input kind")
    p.add_argument("--to", dest="dst", required=True, help="target kind")
    p.add_argument("--k", type=int, default=None)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("reduce-tapes", help="shrink the tape count to twice the alphabet")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_reduce_tapes)

    p = sub.add_parser("kernelize", help="class-based kernel plus size certificate")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_kernelize)

    p = sub.add_parser("verify-reduction", help="solve both sides of a construction")
    p.add_argument("instance")
    p.add_argument("--construction", required=True,
                   help="dominating-set | sync-stars | triangle | path | selector | "
                        "ts-dsr | tj-cdsr | formula")
    p.add_argument("--k", type=int, default=None)
    add_cap(p)
    p.set_defaults(func=_cmd_verify_reduction)

    p = sub.add_parser("verify-witness", help="replay a move sequence")
    p.add_argument("instance")
    p.add_argument("witness")
    p.set_defaults(func=_cmd_verify_witness)

    p = sub.add_parser("gen", help="seeded random instances")
    p.add_argument("what", choices=["graph", "tape"])
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--constraint", default=None,
                   help="none | connected | k3d-free:<d> | connected-k3d-free:<d>")
    p.add_argument("--tapes", type=int, default=2)
    p.add_argument("--cells", type=int, default=4)
    p.add_argument("--sigma", type=int, default=2)
    p.add_argument("--sync", action="store_true")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("acceptance", help="run the full oracle-equivalence suite")
    p.add_argument("--quick", action="store_true",
                   help="reduced trial counts (smoke test, not the official run)")
    p.add_argument("--trials", type=int, default=0,
                   help="raise randomized criteria to at least this many trials")
    p.set_defaults(func=_cmd_acceptance)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (MalformedInput, InfeasibleInstance, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (SizeCapExceeded, StateCapExceeded, RetryBudgetExceeded) as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
