"""The letter-tape data model and its exhaustive reachability solvers.

A tape is a connected cell graph whose cells carry letter subsets (bitmask
encoded).  One read head sits on each tape; a configuration is valid when the
heads' letters jointly cover the whole alphabet.  Synchronized instances
additionally keep all head numbers within one step of each other modulo r.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .dsr import DEFAULT_STATE_CAP, ReconfigResult
from .errors import MalformedInput, SizeCapExceeded, StateCapExceeded
from .graphs import Graph, bits, set_of


@dataclass(frozen=True)
class Tape:
    cells: Graph
    content: tuple[int, ...]  # one letter bitmask per cell
    start: int
    end: int
    number: Optional[tuple[int, ...]] = None  # values in [1, r] when present

    def __post_init__(self):
        if len(self.content) != self.cells.n:
            raise MalformedInput("content length does not match cell count")
        for c in (self.start, self.end):
            if not (0 <= c < self.cells.n):
                raise MalformedInput(f"start/end cell {c} out of range")
        if self.number is not None and len(self.number) != self.cells.n:
            raise MalformedInput("numbering length does not match cell count")

    def letters(self, cell: int) -> frozenset[int]:
        return set_of(self.content[cell])

    def alphabet_mask(self) -> int:
        m = 0
        for c in self.content:
            m |= c
        return m


@dataclass(frozen=True)
class TapeInstance:
    sigma: int
    tapes: tuple[Tape, ...]
    cs: tuple[int, ...]
    ct: tuple[int, ...]
    sync: bool = False
    r: Optional[int] = None
    provenance: Optional[dict] = field(default=None, compare=False)

    @property
    def full_mask(self) -> int:
        return (1 << self.sigma) - 1


@dataclass(frozen=True)
class MultiTapeInstance:
    sigma: int
    tuples: tuple[tuple[Tape, ...], ...]
    sync: bool = False
    r: Optional[int] = None
    provenance: Optional[dict] = field(default=None, compare=False)

    @property
    def full_mask(self) -> int:
        return (1 << self.sigma) - 1

    def select(self, indices: tuple[int, ...]) -> TapeInstance:
        """Fix one tape per tuple; heads run from start cells to end cells."""
        chosen = tuple(self.tuples[j][i] for j, i in enumerate(indices))
        return TapeInstance(
            sigma=self.sigma,
            tapes=chosen,
            cs=tuple(t.start for t in chosen),
            ct=tuple(t.end for t in chosen),
            sync=self.sync,
            r=self.r,
        )


@dataclass(frozen=True)
class MultiResult:
    positive: bool
    selection: Optional[tuple[int, ...]]


# ---------------------------------------------------------------------------
# validity & successors

def _mod_close(a: int, b: int, r: int) -> bool:
    return (a - b) % r in (0, 1, r - 1)


def _synchronized(inst: TapeInstance, config: tuple[int, ...]) -> bool:
    assert inst.r is not None
    nums = []
    for tape, c in zip(inst.tapes, config):
        if tape.number is None:
            raise MalformedInput("synchronized instance contains an unnumbered tape")
        nums.append(tape.number[c])
    return all(_mod_close(a, b, inst.r) for a, b in itertools.combinations(nums, 2))


def is_valid_configuration(inst: TapeInstance, config: tuple[int, ...]) -> bool:
    if len(config) != len(inst.tapes):
        raise MalformedInput("configuration must hold one cell per tape")
    covered = 0
    for tape, c in zip(inst.tapes, config):
        if not (0 <= c < tape.cells.n):
            raise MalformedInput(f"cell {c} out of range")
        covered |= tape.content[c]
    if covered & inst.full_mask != inst.full_mask:
        return False
    if inst.sync and not _synchronized(inst, config):
        return False
    return True


def tape_successors(inst: TapeInstance, config: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Move exactly one head along a tape edge; keep only valid results."""
    if not is_valid_configuration(inst, config):
        raise MalformedInput("successors of an invalid configuration")
    out = []
    for i, tape in enumerate(inst.tapes):
        for nb in tape.cells.neighbors(config[i]):
            nxt = config[:i] + (nb,) + config[i + 1 :]
            if is_valid_configuration(inst, nxt):
                out.append(nxt)
    return out


def solve_tape(inst: TapeInstance, state_cap: int = DEFAULT_STATE_CAP) -> ReconfigResult:
    """Breadth-first search over head tuples from cs; reachable iff ct found."""
    cs, ct = tuple(inst.cs), tuple(inst.ct)
    for name, config in (("cs", cs), ("ct", ct)):
        if not is_valid_configuration(inst, config):
            raise MalformedInput(f"{name} is not a valid configuration")
    if cs == ct:
        return ReconfigResult(True, (cs,), 1)
    parents: dict[tuple[int, ...], Optional[tuple[int, ...]]] = {cs: None}
    queue = deque([cs])
    while queue:
        cur = queue.popleft()
        for nxt in tape_successors(inst, cur):
            if nxt in parents:
                continue
            parents[nxt] = cur
            if nxt == ct:
                path = [nxt]
                while parents[path[-1]] is not None:
                    path.append(parents[path[-1]])
                path.reverse()
                return ReconfigResult(True, tuple(path), len(parents))
            if len(parents) > state_cap:
                raise StateCapExceeded(f"tape search passed {state_cap} configurations")
            queue.append(nxt)
    return ReconfigResult(False, None, len(parents))


def solve_multi(inst: MultiTapeInstance, state_cap: int = DEFAULT_STATE_CAP) -> MultiResult:
    """Try selections in lexicographic order; first positive one wins."""
    if not inst.tuples:
        # zero tuples: the empty configuration covers nothing
        return MultiResult(inst.sigma == 0, ())
    for indices in itertools.product(*(range(len(t)) for t in inst.tuples)):
        sel = inst.select(indices)
        try:
            if solve_tape(sel, state_cap).reachable:
                return MultiResult(True, indices)
        except MalformedInput:
            # selection whose start or end configuration is invalid: negative
            continue
    return MultiResult(False, None)


# ---------------------------------------------------------------------------
# irreducibility & extended graph

def is_irreducible(inst: TapeInstance | MultiTapeInstance, cap: int = 1 << 20) -> bool:
    """No selection of fewer cells than tapes, one cell per tape, covers Σ.

    The per-tape restriction matters: tokens of the downstream reconfiguration
    encodings occupy at most one cell per tape, and that is the coverage the
    notion has to rule out.  Exact cover by dynamic programming over alphabet
    submasks, exponential in the alphabet only.
    """
    tapes = _all_tapes(inst)
    if 1 << inst.sigma > cap:
        raise SizeCapExceeded(f"alphabet of {inst.sigma} letters exceeds irreducibility cap")
    full = (1 << inst.sigma) - 1
    INF = len(tapes) + 1
    dist = [INF] * (full + 1)
    dist[0] = 0
    for t in tapes:  # each tape contributes at most one cell
        masks = sorted({c & full for c in t.content if c & full})
        if not masks:
            continue
        nxt = list(dist)
        for m in range(full + 1):
            if dist[m] >= INF:
                continue
            for cm in masks:
                nm = m | cm
                if nxt[nm] > dist[m] + 1:
                    nxt[nm] = dist[m] + 1
        dist = nxt
    return dist[full] >= len(tapes)


def _all_tapes(inst: TapeInstance | MultiTapeInstance) -> tuple[Tape, ...]:
    if isinstance(inst, MultiTapeInstance):
        return tuple(t for tup in inst.tuples for t in tup)
    return inst.tapes


@dataclass(frozen=True)
class ExtendedGraph:
    """Cells of all tapes plus one vertex per letter, with id bookkeeping."""

    graph: Graph
    cell_base: tuple[int, ...]  # id offset of each tape's cells
    letter_base: int
    tape_of: dict[int, int]  # cell vertex -> tape index

    def cell_id(self, tape: int, cell: int) -> int:
        return self.cell_base[tape] + cell

    def letter_id(self, letter: int) -> int:
        return self.letter_base + letter


def build_extended(inst: TapeInstance | MultiTapeInstance) -> ExtendedGraph:
    tapes = _all_tapes(inst)
    base, off = [], 0
    for t in tapes:
        base.append(off)
        off += t.cells.n
    letter_base = off
    n = off + inst.sigma
    edges: list[tuple[int, int]] = []
    labels: dict[int, str] = {}
    tape_of: dict[int, int] = {}
    for i, t in enumerate(tapes):
        for u, v in t.cells.edges:
            edges.append((base[i] + u, base[i] + v))
        for c in range(t.cells.n):
            vid = base[i] + c
            labels[vid] = f"cell:{i}:{c}"
            tape_of[vid] = i
            for letter in bits(t.content[c]):
                if letter >= inst.sigma:
                    raise MalformedInput(f"letter {letter} outside alphabet of {inst.sigma}")
                edges.append((vid, letter_base + letter))
    for letter in range(inst.sigma):
        labels[letter_base + letter] = f"letter:{letter}"
    return ExtendedGraph(Graph(n, edges, labels), tuple(base), letter_base, tape_of)


def extended_graph(inst: TapeInstance | MultiTapeInstance) -> Graph:
    return build_extended(inst).graph


# ---------------------------------------------------------------------------
# shape predicates & validation

def tape_is_path(tape: Tape) -> bool:
    """Connected, max degree 2, endpoints exactly the start and end cells."""
    g = tape.cells
    if not g.is_connected():
        return False
    if g.n == 1:
        return tape.start == tape.end == 0
    degs = [g.degree(v) for v in range(g.n)]
    if max(degs) > 2:
        return False
    endpoints = {v for v in range(g.n) if degs[v] == 1}
    return endpoints == {tape.start, tape.end}


def tape_is_subdivided_star(tape: Tape) -> bool:
    """A tree with at most one vertex of degree three or more."""
    g = tape.cells
    if not g.is_connected() or g.m != g.n - 1:
        return False
    return sum(1 for v in range(g.n) if g.degree(v) >= 3) <= 1


def validate_instance(
    inst: TapeInstance,
    expect_paths: bool = False,
    expect_stars: bool = False,
) -> list[str]:
    """All violated invariants, as human-readable strings; empty means sound."""
    problems = []
    if len(inst.cs) != len(inst.tapes) or len(inst.ct) != len(inst.tapes):
        return ["cs/ct do not hold one cell per tape"]
    for i, t in enumerate(inst.tapes):
        if not t.cells.is_connected():
            problems.append(f"tape {i} cell graph is disconnected")
        if t.alphabet_mask() & ~inst.full_mask:
            problems.append(f"tape {i} uses letters outside the alphabet")
        if expect_paths and not tape_is_path(t):
            problems.append(f"tape {i} is not a path")
        if expect_stars and not tape_is_subdivided_star(t):
            problems.append(f"tape {i} is not a subdivided star")
        if t.number is not None:
            if inst.r is not None:
                r = inst.r
                if any(not (1 <= x <= r) for x in t.number):
                    problems.append(f"tape {i} numbering leaves [1,{r}]")
                for u, v in t.cells.edges:
                    if not _mod_close(t.number[u], t.number[v], r):
                        problems.append(
                            f"tape {i} cells {u},{v} adjacent but numbered "
                            f"{t.number[u]},{t.number[v]} (gap > 1 mod {r})"
                        )
        elif inst.sync:
            problems.append(f"tape {i} lacks a numbering in a synchronized instance")
    if inst.sync and inst.r is None:
        problems.append("synchronized instance without modulus r")
    try:
        for name, config in (("cs", inst.cs), ("ct", inst.ct)):
            if not is_valid_configuration(inst, config):
                problems.append(f"{name} is not a valid configuration")
            elif inst.sync:
                nums = {t.number[c] for t, c in zip(inst.tapes, config)}
                if len(nums) > 1:
                    problems.append(f"{name} heads are not all on one number")
    except MalformedInput as exc:
        problems.append(str(exc))
    return problems


def validate_multi(inst: MultiTapeInstance) -> list[str]:
    problems = []
    for j, tup in enumerate(inst.tuples):
        if not tup:
            problems.append(f"tuple {j} is empty")
        for i, t in enumerate(tup):
            if not tape_is_path(t):
                problems.append(f"tuple {j} member {i} is not a path with start/end endpoints")
            if t.alphabet_mask() & ~inst.full_mask:
                problems.append(f"tuple {j} member {i} uses letters outside the alphabet")
    return problems


# ---------------------------------------------------------------------------
# small constructors

def path_tape(
    contents: Iterable[int],
    number: Optional[Iterable[int]] = None,
    start: int = 0,
    end: Optional[int] = None,
) -> Tape:
    """Path-shaped tape whose cells are 0..m-1 in order; contents are masks."""
    contents = tuple(contents)
    m = len(contents)
    g = Graph(m, [(i, i + 1) for i in range(m - 1)])
    return Tape(
        cells=g,
        content=contents,
        start=start,
        end=m - 1 if end is None else end,
        number=tuple(number) if number is not None else None,
    )
