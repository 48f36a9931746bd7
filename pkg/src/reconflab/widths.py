"""Explicit tree/path decompositions for reduction artifacts.

Every constructor records provenance; this module replays it to build the
decomposition the construction promises, bag by bag, instead of trying to
compute widths (which would be NP-hard).  Bags are assembled over symbolic
handles and materialized against the artifact's actual vertex numbering at
the end:

    ("c", tape, cell)   a tape cell
    ("l", letter)       an alphabet vertex
    ("x", i) / ("y",) / ("z",)   guard / hub / pendant of a sliding artifact
"""
from __future__ import annotations

from typing import Optional

from .decomposition import TreeDecomposition
from .dsr import DsrInstance
from .errors import MalformedInput
from .tapes import TapeInstance, build_extended

Handle = tuple
Bags = list[frozenset]
Edges = list[tuple[int, int]]


# ---------------------------------------------------------------------------
# generic helpers

def _td_of_tree(adj, root, extra: frozenset) -> tuple[Bags, Edges]:
    """Decomposition of a tree: one bag per edge plus a root bag."""
    bags: Bags = [frozenset({root}) | extra]
    edges: Edges = []
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        u = stack.pop()
        for w in adj(u):
            if w not in parent:
                parent[w] = u
                order.append(w)
                stack.append(w)
    bag_of = {root: 0}
    for u in order[1:]:
        bags.append(frozenset({u, parent[u]}) | extra)
        idx = len(bags) - 1
        edges.append((idx, bag_of[parent[u]]))
        bag_of[u] = idx
    return bags, edges


def _chain(bags: Bags) -> Edges:
    return [(i, i + 1) for i in range(len(bags) - 1)]


# ---------------------------------------------------------------------------
# explicit decomposition of the subdivided-stars artifact

def _stars_handles(prov: dict, kind: str) -> tuple[Bags, Edges]:
    from .reductions import _star_layout

    k, n = prov["k"], prov["n"]
    branch_counts = prov["branch_counts"]
    check = ("l", k)
    arb = k  # arbiter tape index
    c_arb = ("c", arb, 0)

    if kind == "path":
        # One segment per token letter: the tape's star walked branch by
        # branch with its center pinned in every bag, then the arbiter's
        # matching branch; the arbiter center and the check letter ride along
        # everywhere.
        bags: Bags = []
        _, _, arb_branches = _star_layout(n, branch_counts[k])
        for i in range(k):
            letter = ("l", i)
            extra = frozenset({letter, c_arb, check})
            _, _, branch_cells = _star_layout(n, branch_counts[i])
            center = ("c", i, 0)
            for ids in branch_cells:
                vs = [("c", i, v) for v in ids]
                if len(vs) == 1:
                    bags.append(frozenset({center, vs[0]}) | extra)
                for a, b in zip(vs, vs[1:]):
                    bags.append(frozenset({center, a, b}) | extra)
            awalk = [("c", arb, v) for v in arb_branches[i]]
            for a, b in zip(awalk, awalk[1:]):
                bags.append(frozenset({a, b}) | extra)
        return bags, _chain(bags)

    bags = []
    edges: Edges = []
    spine = 0
    bags.append(frozenset({c_arb, check}))  # shared arbiter-center bag
    _, _, arb_branches = _star_layout(n, branch_counts[k])
    for i in range(k):
        letter = ("l", i)
        extra = frozenset({letter, check})
        glue = len(bags)
        bags.append(frozenset({letter, check}))
        # the tape's own star, rooted at its center
        _, _, branch_cells = _star_layout(n, branch_counts[i])
        adjacency: dict[Handle, list[Handle]] = {("c", i, 0): []}
        for ids in branch_cells:
            walk = [("c", i, 0)] + [("c", i, v) for v in ids]
            for a, b in zip(walk, walk[1:]):
                adjacency.setdefault(a, []).append(b)
                adjacency.setdefault(b, []).append(a)
        tb, te = _td_of_tree(lambda u: adjacency.get(u, ()), ("c", i, 0), extra)
        off = len(bags)
        bags.extend(tb)
        edges.extend((a + off, b + off) for a, b in te)
        edges.append((glue, off))  # glue bag to the star's root bag
        # the arbiter branch serving this token, rooted at the arbiter center
        awalk = [c_arb] + [("c", arb, v) for v in arb_branches[i]]
        prev: Optional[int] = None
        first = None
        for a, b in zip(awalk, awalk[1:]):
            bags.append(frozenset({a, b}) | extra)
            idx = len(bags) - 1
            if prev is None:
                first = idx
            else:
                edges.append((prev, idx))
            prev = idx
        if first is not None:
            edges.append((spine, first))
            edges.append((glue, first))
        else:  # token with an empty arbiter branch cannot happen, but stay total
            edges.append((spine, glue))
    return bags, edges


# ---------------------------------------------------------------------------
# transforms along the provenance chain

def _triangle_handles(source_bags: Bags, source_edges: Edges, source: TapeInstance,
                      bases: list[int]) -> tuple[Bags, Edges]:
    tri = len(source.tapes)
    tri_cells = frozenset({("c", tri, 0), ("c", tri, 1), ("c", tri, 2)})
    out: Bags = []
    for bag in source_bags:
        tapes_here = {h[1] for h in bag if h[0] == "c"}
        letters = frozenset(("l", bases[i] + d) for i in tapes_here for d in range(3))
        out.append(bag | letters | tri_cells)
    return out, list(source_edges)


def _tsdsr_handles(source_bags: Bags, source_edges: Edges, source: TapeInstance,
                   kind: str) -> tuple[Bags, Edges]:
    out: Bags = []
    for bag in source_bags:
        tapes_here = {h[1] for h in bag if h[0] == "c"}
        out.append(bag | {("x", i) for i in tapes_here} | {("y",)})
    edges = list(source_edges)
    # pendant bag for the hub leaf; appended at the chain end so path
    # decompositions stay paths
    attach = len(out) - 1 if kind == "path" else 0
    out.append(frozenset({("y",), ("z",)}))
    edges.append((attach, len(out) - 1))
    return out, edges


# ---------------------------------------------------------------------------
# deriving and materializing

def _tape_handle_decomposition(inst: TapeInstance, kind: str) -> tuple[Bags, Edges]:
    prov = inst.provenance or {}
    construction = prov.get("construction")
    if construction == "sync-stars":
        return _stars_handles(prov, kind)
    if construction == "triangle-desync":
        src: TapeInstance = prov["source"]
        sb, se = _tape_handle_decomposition(src, kind)
        return _triangle_handles(sb, se, src, prov["triple_bases"])
    # fallback: one bag holding the whole extended graph
    bag = set()
    for i, t in enumerate(inst.tapes):
        bag.update(("c", i, c) for c in range(t.cells.n))
    bag.update(("l", l) for l in range(inst.sigma))
    return [frozenset(bag)], []


def derive_decomposition(artifact, kind: str = "tree") -> TreeDecomposition:
    """The decomposition promised by the artifact's construction.

    Accepts subdivided-stars artifacts, phase-desynchronized artifacts (the
    source's decomposition widened by the fresh letters and the triangle),
    sliding-reduction artifacts (guards into their tapes' bags, the hub
    everywhere, a pendant bag), and falls back to a single bag for plain
    instances.  kind selects the tree- or path-shaped variant.
    """
    if kind not in ("tree", "path"):
        raise MalformedInput(f"unknown decomposition kind {kind!r}")
    if isinstance(artifact, DsrInstance):
        prov = artifact.provenance or {}
        if prov.get("construction") != "ts-dsr":
            raise MalformedInput("no decomposition recipe for this artifact")
        src: TapeInstance = prov["source"]
        bags, edges = _tape_handle_decomposition(src, kind)
        bags, edges = _tsdsr_handles(bags, edges, src, kind)
        ids = _dsr_handle_ids(prov, src)
        tape_of = {
            prov["cell_base"][i] + c: i
            for i, t in enumerate(src.tapes)
            for c in range(t.cells.n)
        }
        return TreeDecomposition(
            bags=tuple(frozenset(ids[h] for h in bag) for bag in bags),
            tree=tuple(edges),
            tape_of=tape_of,
        )
    if isinstance(artifact, TapeInstance):
        bags, edges = _tape_handle_decomposition(artifact, kind)
        ext = build_extended(artifact)
        ids = {}
        for i, t in enumerate(artifact.tapes):
            for c in range(t.cells.n):
                ids[("c", i, c)] = ext.cell_id(i, c)
        for l in range(artifact.sigma):
            ids[("l", l)] = ext.letter_id(l)
        return TreeDecomposition(
            bags=tuple(frozenset(ids[h] for h in bag) for bag in bags),
            tree=tuple(edges),
            tape_of=dict(ext.tape_of),
        )
    raise MalformedInput("unknown artifact type")


def _dsr_handle_ids(prov: dict, src: TapeInstance) -> dict:
    ids = {}
    for i, t in enumerate(src.tapes):
        for c in range(t.cells.n):
            ids[("c", i, c)] = prov["cell_base"][i] + c
    for l in range(src.sigma):
        ids[("l", l)] = prov["letter_base"] + l
    for i, g in enumerate(prov["guards"]):
        ids[("x", i)] = g
    ids[("y",)] = prov["hub"]
    ids[("z",)] = prov["leaf"]
    return ids
