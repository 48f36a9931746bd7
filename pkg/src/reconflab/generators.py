"""Seeded random instance generators with rejection sampling.

Everything here is a pure function of (seed, parameters); the acceptance
suite and the CLI rely on that for reproducibility.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from typing import Optional

from .dsr import JUMP, SLIDE, DsrInstance, is_feasible
from .errors import RetryBudgetExceeded
from .graphs import Graph, contains_biclique, dominates
from .kernel import DcrInstance, K3D_FREE, compute_core
from .tapes import (
    MultiTapeInstance,
    Tape,
    TapeInstance,
    is_valid_configuration,
    path_tape,
)

RETRY_BUDGET = 5000


def gen_random_graph(
    seed: int,
    n: int,
    edge_prob: float,
    constraint: Optional[str] = None,
    retries: int = RETRY_BUDGET,
) -> Graph:
    """Erdos-Renyi style sampling, rejected until the constraint holds.

    constraint: None, "connected", or "k3d-free:<d>" (no complete bipartite
    3-by-d subgraph).
    """
    rng = random.Random(seed)
    for _ in range(retries):
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < edge_prob])
        if constraint is None or constraint == "none":
            return g
        if constraint == "connected":
            if g.is_connected():
                return g
        elif constraint.startswith("k3d-free:"):
            d = int(constraint.split(":", 1)[1])
            if not contains_biclique(g, 3, d):
                return g
        elif constraint.startswith("connected-k3d-free:"):
            d = int(constraint.split(":", 1)[1])
            if g.is_connected() and not contains_biclique(g, 3, d):
                return g
        else:
            raise ValueError(f"unknown constraint {constraint!r}")
    raise RetryBudgetExceeded(f"no graph satisfying {constraint!r} in {retries} tries")


def random_connected_cells(rng: random.Random, m: int, extra_prob: float = 0.2) -> Graph:
    """Random tree plus a few extra edges: connected by construction."""
    edges = [(i, rng.randrange(i)) for i in range(1, m)]
    for u, v in itertools.combinations(range(m), 2):
        if rng.random() < extra_prob:
            edges.append((u, v))
    return Graph(m, edges)


def _bfs_layers(g: Graph, root: int) -> list[int]:
    dist = [0] * g.n
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in g.adj[u]:
            if w not in seen:
                seen.add(w)
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def gen_random_tape_instance(
    seed: int,
    tapes: int,
    cells: int,
    sigma: int,
    sync: bool = False,
    content_prob: float = 0.55,
    retries: int = RETRY_BUDGET,
) -> TapeInstance:
    """Random connected cell graphs with random contents and valid endpoints.

    Synchronized instances get breadth-first layer numbering (adjacent cells
    differ by at most one) and head configurations sitting on one shared
    number.
    """
    rng = random.Random(seed)
    for _ in range(retries):
        built = []
        for _ in range(tapes):
            m = rng.randint(1 if not sync else 2, cells)
            g = random_connected_cells(rng, m)
            content = tuple(
                sum(1 << l for l in range(sigma) if rng.random() < content_prob)
                for _ in range(m)
            )
            number = tuple(d + 1 for d in _bfs_layers(g, 0)) if sync else None
            built.append(Tape(g, content, 0, m - 1, number))
        if sync:
            r = max(max(t.number) for t in built)
            if r < 2:
                continue
            probe = TapeInstance(sigma, tuple(built), (0,) * tapes, (0,) * tapes,
                                 sync=True, r=r)
            configs = []
            top = min(max(t.number) for t in built)
            for number in range(1, top + 1):
                pools = [
                    [c for c in range(t.cells.n) if t.number[c] == number]
                    for t in built
                ]
                for combo in itertools.product(*pools):
                    if is_valid_configuration(probe, combo):
                        configs.append(combo)
            if len(configs) >= 2:
                cs, ct = rng.sample(configs, 2)
                return TapeInstance(sigma, tuple(built), cs, ct, sync=True, r=r)
        else:
            probe = TapeInstance(sigma, tuple(built), (0,) * tapes, (0,) * tapes)
            valid = [
                c
                for c in itertools.product(*(range(t.cells.n) for t in built))
                if is_valid_configuration(probe, c)
            ]
            if len(valid) >= 2:
                cs, ct = rng.sample(valid, 2)
                return TapeInstance(sigma, tuple(built), cs, ct)
    raise RetryBudgetExceeded("no valid tape instance within the retry budget")


def gen_sync_path_instance(seed: int, tapes: int, cells: int, sigma: int,
                           retries: int = RETRY_BUDGET) -> TapeInstance:
    """Equal-length position-numbered path tapes with shared-number endpoints."""
    rng = random.Random(seed)
    for _ in range(retries):
        m = rng.randint(2, cells)
        p = rng.randint(1, tapes)
        built = [
            path_tape(
                [sum(1 << l for l in range(sigma) if rng.random() < 0.6) for _ in range(m)],
                number=range(1, m + 1),
            )
            for _ in range(p)
        ]
        probe = TapeInstance(sigma, tuple(built), (0,) * p, (0,) * p, sync=True, r=m)
        cols = [j for j in range(m) if is_valid_configuration(probe, (j,) * p)]
        if len(cols) >= 2:
            js, jt = rng.sample(cols, 2)
            return TapeInstance(sigma, tuple(built), (js,) * p, (jt,) * p, sync=True, r=m)
    raise RetryBudgetExceeded("no synchronized path instance within the retry budget")


def gen_random_multi(seed: int, tuples: int, members: int, cells: int,
                     sigma: int = 1) -> MultiTapeInstance:
    rng = random.Random(seed)
    shape = []
    for _ in range(rng.randint(1, tuples)):
        shape.append(
            tuple(
                path_tape(
                    [sum(1 << l for l in range(sigma) if rng.random() < 0.6)
                     for _ in range(rng.randint(1, cells))]
                )
                for _ in range(rng.randint(1, members))
            )
        )
    return MultiTapeInstance(sigma=sigma, tuples=tuple(shape))


def gen_random_dsr_instance(
    seed: int,
    n_max: int = 6,
    k_max: int = 3,
    rule: Optional[str] = None,
    retries: int = RETRY_BUDGET,
) -> DsrInstance:
    rng = random.Random(seed)
    for _ in range(retries):
        n = rng.randint(2, n_max)
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.55])
        k = rng.randint(1, min(k_max, n - 1))
        rule_ = rule or rng.choice([SLIDE, JUMP])
        probe = DsrInstance(g, k, frozenset(range(k)), frozenset(range(k)), rule_)
        feas = [
            frozenset(c)
            for c in itertools.combinations(range(n), k)
            if is_feasible(probe, frozenset(c))
        ]
        if len(feas) >= 2:
            src, tgt = rng.sample(feas, 2)
            return DsrInstance(g, k, src, tgt, rule_)
    raise RetryBudgetExceeded("no feasible instance within the retry budget")


def gen_partitioned_instance(seed: int, n_max: int = 5, k_max: int = 2,
                             retries: int = RETRY_BUDGET) -> DsrInstance:
    rng = random.Random(seed)
    for _ in range(retries):
        n = rng.randint(2, n_max)
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.6])
        if not g.is_connected():
            continue
        k = rng.randint(1, min(k_max, n))
        verts = list(range(n))
        rng.shuffle(verts)
        cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
        parts, prev = [], 0
        for c in cuts + [n]:
            parts.append(frozenset(verts[prev:c]))
            prev = c
        feas = [
            frozenset(c)
            for c in itertools.product(*[sorted(p) for p in parts])
            if dominates(g, set(c), range(n))
        ]
        if len(feas) >= 2:
            src, tgt = rng.sample(feas, 2)
            return DsrInstance(g, k, src, tgt, JUMP, partition=tuple(parts))
    raise RetryBudgetExceeded("no partitioned instance within the retry budget")


def gen_dcr_instance(seed: int, n_max: int = 8, k_max: int = 2, d: int = 2,
                     family: str = K3D_FREE, retries: int = RETRY_BUDGET) -> DcrInstance:
    rng = random.Random(seed)
    for _ in range(retries):
        n = rng.randint(3, n_max)
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.45])
        if not g.is_connected() or contains_biclique(g, 3, d):
            continue
        k = rng.randint(1, k_max)
        doms = [
            frozenset(c)
            for c in itertools.combinations(range(n), k)
            if dominates(g, c, range(n))
        ]
        if len(doms) < 2:
            continue
        src, tgt = rng.sample(doms, 2)
        core = compute_core(g, k, src | tgt, d)
        return DcrInstance(g, k, src, tgt, d=d, family=family, core=core)
    raise RetryBudgetExceeded("no family-constrained instance within the retry budget")
