"""Exact reachability for dominating-set reconfiguration under sliding and jumping.

Configurations are exact-k vertex sets (no token stacking, no null moves);
the breadth-first search expands lexicographically smallest successors first
so witnesses are reproducible byte for byte.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from math import comb
from typing import Optional

from .errors import InfeasibleInstance, MalformedInput, SizeCapExceeded, StateCapExceeded
from .graphs import Graph, bits, closed_mask_of, delete_vertices, mask_of

SLIDE = "slide"
JUMP = "jump"

DEFAULT_STATE_CAP = 2_000_000
ENUM_CAP = 5_000_000


@dataclass(frozen=True)
class DsrInstance:
    graph: Graph
    k: int
    source: frozenset[int]
    target: frozenset[int]
    rule: str = SLIDE
    connected: bool = False
    core: Optional[frozenset[int]] = None  # defaults to all vertices
    partition: Optional[tuple[frozenset[int], ...]] = None
    provenance: Optional[dict] = field(default=None, compare=False)

    def core_set(self) -> frozenset[int]:
        return self.core if self.core is not None else frozenset(range(self.graph.n))


@dataclass(frozen=True)
class ReconfigResult:
    reachable: bool
    witness: Optional[tuple[frozenset[int], ...]]
    explored: int


def validate_instance(inst: DsrInstance) -> None:
    g = inst.graph
    if inst.rule not in (SLIDE, JUMP):
        raise MalformedInput(f"unknown rule {inst.rule!r}")
    for name, s in (("source", inst.source), ("target", inst.target)):
        if len(s) != inst.k:
            raise MalformedInput(f"{name} has size {len(s)}, expected k={inst.k}")
        for v in s:
            if not (0 <= v < g.n):
                raise MalformedInput(f"{name} vertex {v} out of range")
    if inst.core is not None:
        for v in inst.core:
            if not (0 <= v < g.n):
                raise MalformedInput(f"core vertex {v} out of range")
    if inst.partition is not None:
        seen: set[int] = set()
        for part in inst.partition:
            if seen & part:
                raise MalformedInput("partition parts overlap")
            seen |= part
        for name, s in (("source", inst.source), ("target", inst.target)):
            for part in inst.partition:
                if len(s & part) != 1:
                    raise MalformedInput(f"{name} must hold exactly one vertex per part")
    for name, s in (("source", inst.source), ("target", inst.target)):
        if not is_feasible(inst, s):
            raise MalformedInput(f"{name} is not a feasible configuration")


def _induces_connected(g: Graph, dmask: int) -> bool:
    verts = list(bits(dmask))
    if len(verts) <= 1:
        return True
    seen = 1 << verts[0]
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for w in bits(g.nbr_mask[u] & dmask & ~seen):
            seen |= 1 << w
            stack.append(w)
    return seen == dmask


def is_feasible(inst: DsrInstance, d: frozenset[int]) -> bool:
    """Size k, dominates the core, plus the connectivity/partition side conditions."""
    if len(d) != inst.k:
        return False
    g = inst.graph
    dmask = mask_of(d)
    if mask_of(inst.core_set()) & ~closed_mask_of(g, d):
        return False
    if inst.connected and not _induces_connected(g, dmask):
        return False
    if inst.partition is not None:
        for part in inst.partition:
            if len(d & part) != 1:
                return False
    return True


def _part_of(inst: DsrInstance, v: int) -> Optional[frozenset[int]]:
    for part in inst.partition or ():
        if v in part:
            return part
    return None


def successors(inst: DsrInstance, d: frozenset[int]) -> list[frozenset[int]]:
    """All feasible configurations one legal move away, sorted canonically."""
    if not is_feasible(inst, d):
        raise MalformedInput("successors called on an infeasible configuration")
    g = inst.graph
    out = []
    for u in sorted(d):
        if inst.rule == SLIDE:
            targets = (v for v in g.neighbors(u) if v not in d)
        else:
            targets = (v for v in range(g.n) if v not in d)
        part = _part_of(inst, u) if inst.partition is not None else None
        for v in targets:
            if part is not None and v not in part:
                continue
            nxt = (d - {u}) | {v}
            if is_feasible(inst, nxt):
                out.append(nxt)
    return sorted(set(out), key=sorted)


def _bfs(inst: DsrInstance, state_cap: int) -> ReconfigResult:
    source, target = inst.source, inst.target
    if source == target:
        return ReconfigResult(True, (source,), 1)
    parents: dict[frozenset[int], Optional[frozenset[int]]] = {source: None}
    queue = deque([source])
    while queue:
        cur = queue.popleft()
        for nxt in successors(inst, cur):
            if nxt in parents:
                continue
            parents[nxt] = cur
            if nxt == target:
                path = [nxt]
                while parents[path[-1]] is not None:
                    path.append(parents[path[-1]])
                return ReconfigResult(True, tuple(reversed(path)), len(parents))
            if len(parents) > state_cap:
                raise StateCapExceeded(f"search passed {state_cap} configurations")
            queue.append(nxt)
    return ReconfigResult(False, None, len(parents))


def _solve_per_component(inst: DsrInstance, state_cap: int) -> ReconfigResult:
    """Sliding tokens never change component, so disconnected inputs split."""
    g = inst.graph
    comps = g.components()
    witness_global: list[frozenset[int]] = [inst.source]
    explored = 0
    current = set(inst.source)
    for comp in comps:
        cset = set(comp)
        src = inst.source & cset
        tgt = inst.target & cset
        if len(src) != len(tgt):
            return ReconfigResult(False, None, explored)
        if not src:
            if inst.core_set() & cset:
                # unreachable corner: instance validation already requires the
                # source to dominate the core, so this cannot happen
                return ReconfigResult(False, None, explored)
            continue
        sub, remap = delete_vertices(g, [v for v in range(g.n) if v not in cset])
        back = {nv: ov for ov, nv in remap.items()}
        sub_inst = DsrInstance(
            graph=sub,
            k=len(src),
            source=frozenset(remap[v] for v in src),
            target=frozenset(remap[v] for v in tgt),
            rule=inst.rule,
            connected=False,
            core=frozenset(remap[v] for v in inst.core_set() & cset),
        )
        res = _bfs(sub_inst, state_cap)
        explored += res.explored
        if not res.reachable:
            return ReconfigResult(False, None, explored)
        assert res.witness is not None
        prev = src
        for step in res.witness[1:]:
            newpos = {back[v] for v in step}
            current = (current - prev) | newpos
            witness_global.append(frozenset(current))
            prev = newpos
    return ReconfigResult(True, tuple(witness_global), explored)


def solve(inst: DsrInstance, state_cap: int = DEFAULT_STATE_CAP) -> ReconfigResult:
    """Breadth-first reachability from source to target; shortest witness."""
    validate_instance(inst)
    if (
        inst.rule == SLIDE
        and not inst.connected
        and inst.partition is None
        and not inst.graph.is_connected()
    ):
        return _solve_per_component(inst, state_cap)
    return _bfs(inst, state_cap)


def is_legal_move(inst: DsrInstance, a: frozenset[int], b: frozenset[int]) -> bool:
    """Single-token move check, written independently of successors()."""
    gone, new = a - b, b - a
    if len(gone) != 1 or len(new) != 1:
        return False
    (u,), (v,) = gone, new
    if inst.rule == SLIDE and not inst.graph.has_edge(u, v):
        return False
    if inst.partition is not None:
        pu = _part_of(inst, u)
        if pu is None or v not in pu:
            return False
    return True


def verify_witness(inst: DsrInstance, seq: list[frozenset[int]]) -> bool:
    if not seq:
        return False
    if frozenset(seq[0]) != inst.source or frozenset(seq[-1]) != inst.target:
        return False
    for d in seq:
        if not is_feasible(inst, frozenset(d)):
            return False
    for a, b in zip(seq, seq[1:]):
        if not is_legal_move(inst, frozenset(a), frozenset(b)):
            return False
    return True


def dominating_sets_of_size(g: Graph, size: int, cap: int = ENUM_CAP) -> list[frozenset[int]]:
    """Every dominating set of exactly ``size`` vertices, in sorted order."""
    if comb(g.n, size) > cap:
        raise SizeCapExceeded(f"C({g.n},{size}) exceeds cap {cap}")
    full = g.full_mask
    out = []
    for combo in itertools.combinations(range(g.n), size):
        m = 0
        for v in combo:
            m |= g.closed_mask[v]
        if m == full:
            out.append(frozenset(combo))
    return out


def enumerate_dominating_sets(g: Graph, size: int):
    """Yield every dominating set of exactly ``size`` vertices, each once.

    Branches on the smallest undominated vertex's closed neighborhood with an
    exclusion set for canonicity; once everything is dominated, the remaining
    slots are filled in ascending order.  Output-sensitive, so it stays usable
    where scanning all n-choose-size subsets would not.
    """
    full = g.full_mask
    maxcov = max((m.bit_count() for m in g.closed_mask), default=1)

    def rec(d: tuple, dmask: int, covered: int, banned: int, min_free: int):
        rest = size - len(d)
        if rest == 0:
            if covered == full:
                yield frozenset(d)
            return
        missing = full & ~covered
        if missing:
            if missing.bit_count() > rest * maxcov:
                return
            v = (missing & -missing).bit_length() - 1
            local_ban = banned
            for u in bits(g.closed_mask[v] & ~local_ban & ~dmask):
                yield from rec(d + (u,), dmask | 1 << u, covered | g.closed_mask[u], local_ban, 0)
                local_ban |= 1 << u
        else:
            for u in range(min_free, g.n):
                if (dmask >> u | banned >> u) & 1:
                    continue
                yield from rec(d + (u,), dmask | 1 << u, covered, banned, u + 1)

    yield from rec((), 0, 0, 0, 0)


def minimum_dominating_sets(g: Graph, k: int, cap: int = ENUM_CAP) -> list[frozenset[int]]:
    """All minimum-cardinality dominating sets, searching sizes 0..k.

    The returned sets have the domination number as their size; if that is
    smaller than k the caller sees it directly from the result.  Raises when
    no dominating set of size at most k exists.
    """
    for size in range(0, k + 1):
        found = dominating_sets_of_size(g, size, cap)
        if found:
            return found
    raise InfeasibleInstance(f"no dominating set of size at most {k}")
