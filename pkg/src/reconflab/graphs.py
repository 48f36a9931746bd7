"""Graph primitives: adjacency, domination, neighborhood classes, structural verifiers.

Vertex sets are frozensets at the API boundary and int bitmasks in inner
loops; Python ints are arbitrary-precision, so one representation covers
every graph size this package handles.
"""
from __future__ import annotations

import itertools
from math import comb
from typing import Iterable, Optional

from .errors import MalformedInput, SizeCapExceeded

# Caps for the exponential verifiers.  They exist only for desk-scale
# acceptance runs; anything bigger is a misuse, not a workload.
ENUM_CAP = 5_000_000


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int):
    """Yield set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    ``labels`` carries optional role tags ("cell:2:0", "letter:1", ...) that
    reduction artifacts attach to their vertices.
    """

    __slots__ = ("n", "adj", "labels", "nbr_mask", "closed_mask", "_edges", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (), labels: Optional[dict[int, str]] = None):
        if n < 0:
            raise MalformedInput(f"negative vertex count {n}")
        nbr = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise MalformedInput(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise MalformedInput(f"loop at vertex {u}")
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        self.n = n
        self.nbr_mask = nbr
        self.closed_mask = [nbr[v] | (1 << v) for v in range(n)]
        self.adj = [tuple(bits(nbr[v])) for v in range(n)]
        es = []
        for u in range(n):
            for v in self.adj[u]:
                if u < v:
                    es.append((u, v))
        self._edges = tuple(es)
        if labels:
            for v in labels:
                if not (0 <= v < n):
                    raise MalformedInput(f"label on unknown vertex {v}")
        self.labels = dict(labels) if labels else {}
        self._hash = hash((n, self._edges))

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr_mask[u] >> v & 1)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def vertices(self) -> range:
        return range(self.n)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            stack, comp = [s], []
            seen[s] = True
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self._edges == other._edges
            and self.labels == other.labels
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self._edges)})"


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    edges = [(i, (i + 1) % n) for i in range(n)] if n >= 3 else []
    return Graph(n, edges)


def complete_graph(n: int) -> Graph:
    return Graph(n, list(itertools.combinations(range(n), 2)))


# ---------------------------------------------------------------------------
# rebuild helpers (graphs are immutable; every edit returns a new Graph)

def delete_vertices(g: Graph, dead: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Remove ``dead`` and compact ids; returns the new graph and old->new map."""
    dead = set(dead)
    remap, nxt = {}, 0
    for v in range(g.n):
        if v not in dead:
            remap[v] = nxt
            nxt += 1
    edges = [(remap[u], remap[v]) for u, v in g.edges if u not in dead and v not in dead]
    labels = {remap[v]: lab for v, lab in g.labels.items() if v not in dead}
    return Graph(nxt, edges, labels), remap


def add_vertex(g: Graph, neighbors: Iterable[int], label: Optional[str] = None) -> Graph:
    """Append one vertex (id = g.n) adjacent to ``neighbors``."""
    new = g.n
    edges = list(g.edges) + [(u, new) for u in sorted(set(neighbors))]
    labels = dict(g.labels)
    if label is not None:
        labels[new] = label
    return Graph(g.n + 1, edges, labels)


def remove_edges(g: Graph, gone: Iterable[tuple[int, int]]) -> Graph:
    gone = {(min(u, v), max(u, v)) for u, v in gone}
    return Graph(g.n, [e for e in g.edges if e not in gone], g.labels)


def merge_vertices(g: Graph, group: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Contract ``group`` onto its smallest member; parallel edges collapse."""
    group = sorted(set(group))
    keep = group[0]
    dead = set(group[1:])
    edges = set()
    for u, v in g.edges:
        a = keep if u in dead else u
        b = keep if v in dead else v
        if a != b:
            edges.add((min(a, b), max(a, b)))
    merged = Graph(g.n, sorted(edges), g.labels)
    shrunk, remap = delete_vertices(merged, dead)
    return shrunk, remap


# ---------------------------------------------------------------------------
# domination and neighborhood classes

def _check_subset(g: Graph, s: frozenset[int] | set[int], what: str) -> None:
    for v in s:
        if not (0 <= v < g.n):
            raise MalformedInput(f"{what} contains out-of-range vertex {v}")


def closed_mask_of(g: Graph, d: Iterable[int]) -> int:
    m = 0
    for v in d:
        m |= g.closed_mask[v]
    return m


def dominates(g: Graph, d: Iterable[int], x: Iterable[int]) -> bool:
    """True iff every vertex of ``x`` lies in the closed neighborhood of ``d``."""
    d, x = set(d), set(x)
    _check_subset(g, d, "dominating set")
    _check_subset(g, x, "target set")
    return mask_of(x) & ~closed_mask_of(g, d) == 0


def neighborhood_classes(g: Graph, x: Iterable[int]) -> dict[frozenset[int], frozenset[int]]:
    """Partition V minus x by the trace of each vertex's neighborhood on x.

    The key of a class is the common trace Y; its ``type`` is len(Y).
    """
    x = set(x)
    _check_subset(g, x, "class anchor set")
    xmask = mask_of(x)
    classes: dict[int, list[int]] = {}
    for v in range(g.n):
        if v in x:
            continue
        classes.setdefault(g.nbr_mask[v] & xmask, []).append(v)
    return {set_of(k): frozenset(vs) for k, vs in classes.items()}


def find_reducible_vertex(g: Graph, x: Iterable[int]) -> Optional[int]:
    """First vertex u outside x with N(u) minus {w} inside N(w) for some w outside x.

    One-sided condition (strictly weaker than equal neighborhoods): such a u
    is redundant for any reconfiguration that only has to dominate x.
    """
    x = set(x)
    outside = [v for v in range(g.n) if v not in x]
    for u in outside:
        nu = g.nbr_mask[u]
        for w in outside:
            if w == u:
                continue
            if nu & ~(1 << w) & ~g.nbr_mask[w] == 0:
                return u
    return None


# ---------------------------------------------------------------------------
# degeneracy / feedback vertex sets / bicliques

def degeneracy(g: Graph) -> tuple[int, list[int]]:
    """Exact degeneracy with a witness elimination order.

    Repeatedly deleting a minimum-degree vertex is optimal; the order returned
    gives every vertex at most d neighbors among its successors.
    """
    alive = [True] * g.n
    deg = [g.degree(v) for v in range(g.n)]
    order, d = [], 0
    for _ in range(g.n):
        u = min((v for v in range(g.n) if alive[v]), key=lambda v: (deg[v], v))
        d = max(d, deg[u])
        alive[u] = False
        order.append(u)
        for w in g.adj[u]:
            if alive[w]:
                deg[w] -= 1
    return d, order


def is_forest(g: Graph, removed_mask: int = 0) -> bool:
    """Acyclicity of g minus the vertices in removed_mask (union-find)."""
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for u, v in g.edges:
        if removed_mask >> u & 1 or removed_mask >> v & 1:
            continue
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def min_feedback_vertex_set(g: Graph, cap: int = ENUM_CAP) -> frozenset[int]:
    """Minimum-cardinality vertex set whose removal leaves a forest.

    Exponential subset search, guarded by ``cap`` on the number of candidate
    subsets per size; exists only to certify small reduction artifacts.
    """
    if is_forest(g):
        return frozenset()
    for size in range(1, g.n + 1):
        if comb(g.n, size) > cap:
            raise SizeCapExceeded(f"feedback vertex set search: C({g.n},{size}) exceeds cap {cap}")
        for combo in itertools.combinations(range(g.n), size):
            if is_forest(g, mask_of(combo)):
                return frozenset(combo)
    return frozenset(range(g.n))


def contains_biclique(g: Graph, a: int, b: int, cap: int = ENUM_CAP) -> bool:
    """Does g contain K_{a,b} as a (not necessarily induced) subgraph?

    Enumerates a-subsets and counts common neighbors; common neighbors of a
    loop-free set are automatically disjoint from it.
    """
    if a <= 0 or b <= 0:
        return True
    if a > g.n:
        return False
    if comb(g.n, a) > cap:
        raise SizeCapExceeded(f"biclique search: C({g.n},{a}) exceeds cap {cap}")
    for combo in itertools.combinations(range(g.n), a):
        common = g.full_mask
        for v in combo:
            common &= g.nbr_mask[v]
            if not common:
                break
        if common.bit_count() >= b:
            return True
    return False
