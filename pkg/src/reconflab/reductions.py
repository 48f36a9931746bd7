"""Instance transformers between dominating-set reconfiguration and tape problems.

Every constructor here is a deterministic function of its input and attaches
provenance metadata (construction name, source instance, vertex/letter
bookkeeping) that the width-certificate builders and the structural checkers
consume.  Soundness of each transformer is established by oracle equivalence
at desk scale, not by trusting the construction.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .dsr import SLIDE, JUMP, DsrInstance, minimum_dominating_sets
from .errors import MalformedInput
from .graphs import Graph, add_vertex, complete_graph, mask_of
from .tapes import (
    MultiTapeInstance,
    Tape,
    TapeInstance,
    build_extended,
    is_irreducible,
    path_tape,
    tape_is_path,
)

# ---------------------------------------------------------------------------
# dominating set -> synchronized tape tuples

def ds_to_sync_multi(g: Graph, k: int) -> MultiTapeInstance:
    """Encode size-k domination of g as a synchronized tape-selection instance.

    One tuple per token; every tuple holds one path tape per vertex whose
    j-th cell is marked iff that vertex closed-dominates vertex j.  Heads
    sweep left to right in lockstep; the sweep crosses column j only when
    some selected vertex dominates j.
    """
    if g.n == 0:
        raise MalformedInput("empty graph")
    if k <= 0:
        raise MalformedInput("need at least one token")
    n = g.n
    tapes = []
    for i in range(n):
        content = tuple(1 if (i == j or g.has_edge(i, j)) else 0 for j in range(n))
        tapes.append(path_tape(content, number=range(1, n + 1)))
    tup = tuple(tapes)
    return MultiTapeInstance(
        sigma=1,
        tuples=tuple(tup for _ in range(k)),
        sync=True,
        r=n,
        provenance={"construction": "ds-check", "k": k, "n": n},
    )


# ---------------------------------------------------------------------------
# partitioned token-jumping DSR -> synchronized subdivided stars

def _star_layout(n: int, branches: int) -> tuple[Graph, tuple[int, ...], list[list[int]]]:
    """Subdivided star: center 0, each branch a path of 2n+1 extra cells.

    Returns the cell graph, the cell numbering (1,2,..,n+1,1,n+1,..,2 along
    each branch) and the per-branch cell id lists (center excluded).
    """
    cells = 1 + branches * (2 * n + 1)
    edges, numbers = [], [0] * cells
    numbers[0] = 1
    branch_cells = []
    for b in range(branches):
        ids = [1 + b * (2 * n + 1) + d for d in range(2 * n + 1)]
        branch_cells.append(ids)
        edges.append((0, ids[0]))
        edges.extend((ids[t], ids[t + 1]) for t in range(2 * n))
        for depth, vid in enumerate(ids, start=1):
            if depth <= n:
                numbers[vid] = depth + 1
            elif depth == n + 1:
                numbers[vid] = 1
            else:
                numbers[vid] = 2 * n + 3 - depth
    return Graph(cells, edges), tuple(numbers), branch_cells


def _middle(branch: list[int], n: int) -> int:
    return branch[n]


def partitioned_dsr_to_sync_stars(inst: DsrInstance) -> TapeInstance:
    """Token-jumping DSR with one token pinned per part, as synchronized stars.

    Each part becomes a subdivided star tape with one branch per candidate
    vertex; an extra star with one branch per token arbitrates which token is
    allowed to travel through its center.  Marks on branch cells encode
    closed domination exactly as in ds_to_sync_multi.
    """
    if inst.partition is None:
        raise MalformedInput("instance carries no partition")
    if inst.rule != JUMP:
        raise MalformedInput("the star encoding targets the jumping rule")
    g, k = inst.graph, inst.k
    # Pad with universal dummy vertices until the modulus n+1 is a multiple of
    # three: the downstream phase encodings need that for wrapping numberings,
    # and a universal vertex is dominated by anything, so the answer is
    # untouched (dummies belong to no part, so tokens never reach them).
    while (g.n + 1) % 3:
        g = add_vertex(g, range(g.n))
    n = g.n
    parts = [sorted(p) for p in inst.partition]
    check = 1 << k  # letter k marks "currently dominated"
    tapes: list[Tape] = []
    middles: list[list[int]] = []  # per tape, the middle cell of each branch
    for i, part in enumerate(parts):
        cells, numbers, branch_cells = _star_layout(n, len(part))
        content = [0] * cells.n
        # The check letter on the center lets a head cross it while the others
        # are pinned at number 2; without it the crossing would demand that the
        # stationary tokens alone dominate vertex 0, which jumping never promises.
        content[0] |= check
        for b, v in enumerate(part):
            ids = branch_cells[b]
            content[_middle(ids, n)] |= 1 << i
            for d in range(n + 1, 2 * n + 1):
                content[ids[d]] |= 1 << i  # pending path keeps the token letter
            for j in range(1, n + 1):  # check marks on both cells numbered j+1
                if v == j - 1 or g.has_edge(v, j - 1):
                    content[ids[j - 1]] |= check
                    content[ids[2 * n + 1 - j]] |= check
        tapes.append(Tape(cells, tuple(content), start=0, end=0, number=numbers))
        middles.append([_middle(ids, n) for ids in branch_cells])
    # arbiter star: branch per token, its letter on middle + pending cells,
    # the check letter on every cell numbered 1
    cells, numbers, branch_cells = _star_layout(n, k)
    content = [0] * cells.n
    for b in range(k):
        ids = branch_cells[b]
        content[_middle(ids, n)] |= 1 << b
        for d in range(n + 1, 2 * n + 1):
            content[ids[d]] |= 1 << b
    for vid in range(cells.n):
        if numbers[vid] == 1:
            content[vid] |= check
    arbiter = Tape(cells, tuple(content), start=0, end=0, number=numbers)
    tapes.append(arbiter)
    arbiter_middles = [_middle(ids, n) for ids in branch_cells]

    def heads(config: frozenset[int]) -> tuple[int, ...]:
        out = []
        for i, part in enumerate(parts):
            (v,) = config & frozenset(part)
            out.append(middles[i][part.index(v)])
        out.append(arbiter_middles[0])  # arbiter parked on the first token's middle
        return tuple(out)

    return TapeInstance(
        sigma=k + 1,
        tapes=tuple(tapes),
        cs=heads(inst.source),
        ct=heads(inst.target),
        sync=True,
        r=n + 1,
        provenance={
            "construction": "sync-stars",
            "k": k,
            "n": n,
            "branch_counts": [len(p) for p in parts] + [k],
            "source_instance": inst,
        },
    )


# ---------------------------------------------------------------------------
# desynchronizers: drop the lockstep requirement without changing the answer

def _mod3_added(tape: Tape, base: int) -> Tape:
    content = []
    for c in range(tape.cells.n):
        m = tape.content[c]
        num = tape.number[c] % 3
        if num != 2:
            m |= 1 << base
        if num != 0:
            m |= 1 << (base + 1)
        if num != 1:
            m |= 1 << (base + 2)
        content.append(m)
    return Tape(tape.cells, tuple(content), tape.start, tape.end, tape.number)


def _triple_groups(bases: Sequence[int]) -> tuple[int, int, int]:
    a = b = c = 0
    for base in bases:
        a |= 1 << base
        b |= 1 << (base + 1)
        c |= 1 << (base + 2)
    return a, b, c


def _uncovered(groups_mask: int, tapes: Sequence[Tape], config: Sequence[int]) -> int:
    covered = 0
    for t, cell in zip(tapes, config):
        covered |= t.content[cell]
    return groups_mask & ~covered


def _require_numbered_config(inst: TapeInstance, config: Sequence[int], name: str) -> int:
    nums = {t.number[c] for t, c in zip(inst.tapes, config)}
    if len(nums) != 1:
        raise MalformedInput(f"{name} heads must share one number")
    return nums.pop()


def _normalized_for_phase(inst: TapeInstance) -> TapeInstance:
    """Prepare a synchronized instance for the mod-3 phase encoding.

    With modulus at most 3 the window rule never binds (any two residues are
    within one of each other), so the numbering is flattened to all-ones.
    Otherwise cell classes (number mod 3) must track single moves: linear
    numberings always do, wrapping ones only when the modulus is a multiple
    of three.
    """
    if inst.r is None:
        raise MalformedInput("instance carries no modulus")
    if inst.r <= 3:
        tapes = tuple(
            Tape(t.cells, t.content, t.start, t.end, (1,) * t.cells.n) for t in inst.tapes
        )
        return TapeInstance(inst.sigma, tapes, inst.cs, inst.ct, sync=True, r=4,
                            provenance=inst.provenance)
    wraps = any(
        abs(t.number[u] - t.number[v]) > 1
        for t in inst.tapes
        for u, v in t.cells.edges
    )
    if wraps and inst.r % 3:
        raise MalformedInput("wrapping numbering needs a modulus divisible by 3; renumber first")
    return inst


def desynchronize_triangle(inst: TapeInstance) -> TapeInstance:
    """Equivalent unsynchronized instance with one extra triangle tape.

    Three fresh letters per tape, laid out by cell number modulo three, let a
    triangle tape certify the heads' common phase; any move that would break
    lockstep leaves one fresh letter uncovered.  The result is irreducible.
    """
    if not inst.sync or inst.r is None:
        raise MalformedInput("input must be synchronized and numbered")
    original = inst
    inst = _normalized_for_phase(inst)
    k = len(inst.tapes)
    bases = [inst.sigma + 3 * i for i in range(k)]
    new_tapes = [_mod3_added(t, base) for t, base in zip(inst.tapes, bases)]
    a, b, c = _triple_groups(bases)
    triangle = Tape(complete_graph(3), (a | b, b | c, c | a), start=0, end=0)
    _require_numbered_config(inst, inst.cs, "cs")
    _require_numbered_config(inst, inst.ct, "ct")

    def park(config):
        missing = _uncovered(a | b | c, new_tapes, config)
        for cell in range(3):
            if missing & ~triangle.content[cell] == 0:
                return cell
        raise AssertionError("no triangle cell covers the phase deficit")

    return TapeInstance(
        sigma=inst.sigma + 3 * k,
        tapes=tuple(new_tapes) + (triangle,),
        cs=tuple(inst.cs) + (park(inst.cs),),
        ct=tuple(inst.ct) + (park(inst.ct),),
        sync=False,
        r=None,
        provenance={
            "construction": "triangle-desync",
            "source": original,
            "triple_bases": bases,
        },
    )


def _phase_path(length: int, groups: tuple[int, int, int]) -> Tape:
    a, b, c = groups
    cycle = (c | a, a | b, b | c)  # position t (1-based) covers cycle[t % 3 == 1 ? 0 : ...]
    contents = [cycle[(t - 1) % 3] for t in range(1, length + 1)]
    return path_tape(contents)


def desynchronize_path(inst: TapeInstance) -> TapeInstance:
    """Path-preserving desynchronizer: the extra tape is a path, not a triangle.

    Requires path tapes with start cells numbered 1 and numbering
    non-decreasing towards the end; the phase tape's head then simply tracks
    the common number.
    """
    if not inst.sync or inst.r is None:
        raise MalformedInput("input must be synchronized and numbered")
    for i, t in enumerate(inst.tapes):
        if not tape_is_path(t):
            raise MalformedInput(f"tape {i} is not a path")
        order = path_order(t)
        if t.number[order[0]] != 1:
            raise MalformedInput(f"tape {i} start cell is not numbered 1")
        nums = [t.number[c] for c in order]
        if any(x > y for x, y in zip(nums, nums[1:])):
            raise MalformedInput(f"tape {i} numbering decreases towards the end")
    original = inst
    inst = _normalized_for_phase(inst)
    k = len(inst.tapes)
    bases = [inst.sigma + 3 * i for i in range(k)]
    new_tapes = [_mod3_added(t, base) for t, base in zip(inst.tapes, bases)]
    groups = _triple_groups(bases)
    length = max(max(t.number) for t in inst.tapes)
    phase = _phase_path(length, groups)
    js = _require_numbered_config(inst, inst.cs, "cs")
    jt = _require_numbered_config(inst, inst.ct, "ct")
    return TapeInstance(
        sigma=inst.sigma + 3 * k,
        tapes=tuple(new_tapes) + (phase,),
        cs=tuple(inst.cs) + (js - 1,),
        ct=tuple(inst.ct) + (jt - 1,),
        sync=False,
        r=None,
        provenance={
            "construction": "path-desync",
            "source": original,
            "triple_bases": bases,
        },
    )


# ---------------------------------------------------------------------------
# gluing helpers shared by the selector and the and/or composers

def path_order(tape: Tape) -> list[int]:
    """Cells of a path tape from start to end."""
    if tape.cells.n == 1:
        return [tape.start]
    order, prev, cur = [tape.start], None, tape.start
    while cur != tape.end:
        nxt = [w for w in tape.cells.neighbors(cur) if w != prev]
        if len(nxt) != 1:
            raise MalformedInput("not a path from start to end")
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order


def _glue(members: Sequence[Tape], sep_mask: int, duplicate: bool) -> Tape:
    """Concatenate path tapes with separator cells; optionally duplicate the
    boundary cells and number blocks 4j-3 / 4j-2 / 4j-1 / 4j."""
    contents: list[int] = []
    numbers: list[int] = []
    for j, t in enumerate(members):
        block = [t.content[c] for c in path_order(t)]
        if duplicate:
            contents.append(block[0])
            numbers.append(4 * j + 1)
            contents.extend(block)
            numbers.extend([4 * j + 2] * len(block))
            contents.append(block[-1])
            numbers.append(4 * j + 3)
        else:
            contents.extend(block)
            numbers.extend([0] * len(block))
        if j + 1 < len(members):
            contents.append(sep_mask)
            numbers.append(4 * j + 4)
    return path_tape(contents, number=numbers if duplicate else None)


def _with_letters(tape: Tape, everywhere: int, on_start: int = 0, on_end: int = 0) -> Tape:
    content = list(tape.content)
    for c in range(tape.cells.n):
        content[c] |= everywhere
    content[tape.start] |= on_start
    content[tape.end] |= on_end
    return Tape(tape.cells, tuple(content), tape.start, tape.end, tape.number)


def select_from_tuples(inst: MultiTapeInstance) -> TapeInstance:
    """Collapse tape tuples into single path tapes plus a five-cell selector.

    Each tuple's members are chained with empty separator cells; per-tuple
    letters on every cell, on starts, and on ends let the selector pin all
    heads to the starts of one member each, run that selection, and release
    them only from its ends.
    """
    if inst.sync:
        raise MalformedInput("selector composition applies to unsynchronized instances")
    k = len(inst.tuples)
    sigma = inst.sigma
    amask = mask_of(range(sigma, sigma + k))
    smask = mask_of(range(sigma + k, sigma + 2 * k))
    emask = mask_of(range(sigma + 2 * k, sigma + 3 * k))
    glued = []
    for t, members in enumerate(inst.tuples):
        marked = [
            _with_letters(m, 1 << (sigma + t), 1 << (sigma + k + t), 1 << (sigma + 2 * k + t))
            for m in members
        ]
        glued.append(_glue(marked, sep_mask=0, duplicate=False))
    full = (1 << sigma) - 1
    selector = path_tape(
        (
            full | amask | smask | emask,
            full | amask | emask,
            smask | emask,
            full | amask | smask,
            full | amask | smask | emask,
        )
    )
    tapes = tuple(glued) + (selector,)
    return TapeInstance(
        sigma=sigma + 3 * k,
        tapes=tapes,
        cs=tuple(t.start for t in tapes),
        ct=tuple(t.end for t in tapes),
        sync=False,
        r=None,
        provenance={"construction": "selector", "source": inst},
    )


def _check_composable(insts: Sequence[MultiTapeInstance], need_equal_tuple_sizes: bool) -> None:
    if not insts:
        raise MalformedInput("nothing to compose")
    first = insts[0]
    for other in insts[1:]:
        if other.sigma != first.sigma:
            raise MalformedInput("composed instances must share one alphabet")
        if len(other.tuples) != len(first.tuples):
            raise MalformedInput("composed instances must have the same number of tuples")
        if need_equal_tuple_sizes:
            if [len(t) for t in other.tuples] != [len(t) for t in first.tuples]:
                raise MalformedInput("conjunction needs matching tuple sizes")
    for inst in insts:
        if inst.sync:
            raise MalformedInput("composition applies to unsynchronized instances")


def and_compose(insts: Sequence[MultiTapeInstance]) -> MultiTapeInstance:
    """One instance positive iff some single selection solves every input.

    Tuple-wise gluing with duplicated boundary cells and full-alphabet
    separators, kept in lockstep by per-tuple phase letters and one phase
    tape, forces every input's run to happen under the same tuple choice.
    """
    _check_composable(insts, need_equal_tuple_sizes=True)
    p = len(insts)
    sigma = insts[0].sigma
    k = len(insts[0].tuples)
    full = (1 << sigma) - 1
    bases = [sigma + 3 * t for t in range(k)]
    tuples = []
    for t in range(k):
        members = []
        for i in range(len(insts[0].tuples[t])):
            glue = _glue([q.tuples[t][i] for q in insts], sep_mask=full, duplicate=True)
            members.append(_mod3_added(glue, bases[t]))
        tuples.append(tuple(members))
    phase = _phase_path(4 * p - 1, _triple_groups(bases))
    tuples.append((phase,))
    return MultiTapeInstance(
        sigma=sigma + 3 * k,
        tuples=tuple(tuples),
        sync=False,
        provenance={"construction": "and-compose", "arity": p},
    )


def or_compose(insts: Sequence[MultiTapeInstance]) -> MultiTapeInstance:
    """One instance positive iff at least one input is positive.

    Tuple-wise gluing with empty separators keeps the inputs' selection
    structure intact (a choice of members means the same thing in every
    input, which nested conjunctions rely on); a five-cell selector pins the
    run to a single input's block, and per-tuple phase letters with a phase
    tape keep all blocks aligned.  Adds six fresh letters per tuple.
    """
    _check_composable(insts, need_equal_tuple_sizes=True)
    p = len(insts)
    sigma = insts[0].sigma
    k = len(insts[0].tuples)
    full = (1 << sigma) - 1
    amask = mask_of(range(sigma, sigma + k))
    smask = mask_of(range(sigma + k, sigma + 2 * k))
    emask = mask_of(range(sigma + 2 * k, sigma + 3 * k))
    bases = [sigma + 3 * k + 3 * t for t in range(k)]
    tuples = []
    for t in range(k):
        members = []
        for m in range(len(insts[0].tuples[t])):
            marked = [
                _with_letters(
                    q.tuples[t][m],
                    1 << (sigma + t),
                    1 << (sigma + k + t),
                    1 << (sigma + 2 * k + t),
                )
                for q in insts
            ]
            members.append(_mod3_added(_glue(marked, sep_mask=0, duplicate=True), bases[t]))
        tuples.append(tuple(members))
    selector = path_tape(
        (
            full | amask | smask | emask,
            full | amask | emask,
            smask | emask,
            full | amask | smask,
            full | amask | smask | emask,
        )
    )
    phase = _phase_path(4 * p - 1, _triple_groups(bases))
    return MultiTapeInstance(
        sigma=sigma + 6 * k,
        tuples=tuple(tuples) + ((selector,), (phase,)),
        sync=False,
        provenance={"construction": "or-compose", "arity": p},
    )


# ---------------------------------------------------------------------------
# weighted normalized satisfiability -> tape selection

Node = tuple  # ("var", i) | ("and", (nodes,)) | ("or", (nodes,))


@dataclass(frozen=True)
class NormalizedFormula:
    """Alternating and/or tree over positive literals, top operator `and`."""

    nvars: int
    root: Node

    def __post_init__(self):
        _check_node(self.root, expect="and", nvars=self.nvars)

    def depth(self) -> int:
        return _depth(self.root)

    def evaluate(self, true_vars: frozenset[int]) -> bool:
        return _eval(self.root, true_vars)


def _check_node(node: Node, expect: str, nvars: int) -> None:
    kind = node[0]
    if kind == "var":
        if not (0 <= node[1] < nvars):
            raise MalformedInput(f"variable {node[1]} out of range")
        return
    if kind != expect:
        raise MalformedInput(f"expected {expect!r} node, found {kind!r}")
    children = node[1]
    if not children:
        raise MalformedInput(f"{kind} node with no children")
    nxt = "or" if kind == "and" else "and"
    for child in children:
        _check_node(child, nxt, nvars)


def _depth(node: Node) -> int:
    if node[0] == "var":
        return 0
    return 1 + max(_depth(c) for c in node[1])


def _eval(node: Node, true_vars: frozenset[int]) -> bool:
    if node[0] == "var":
        return node[1] in true_vars
    results = (_eval(c, true_vars) for c in node[1])
    return all(results) if node[0] == "and" else any(results)


def weighted_satisfiable(phi: NormalizedFormula, k: int) -> bool:
    """Truth-table check: some assignment with at most k true variables works."""
    for size in range(0, min(k, phi.nvars) + 1):
        for combo in itertools.combinations(range(phi.nvars), size):
            if phi.evaluate(frozenset(combo)):
                return True
    return False


def _canonical(phi: NormalizedFormula) -> Node:
    """Uniform-depth alternating tree with even depth (and at the top).

    Sibling subformulas must share a shape so the recursive tape encodings
    line up; singleton and/or levels pad the shallow branches.
    """
    depth = max(2, phi.depth())
    if depth % 2:
        depth += 1

    def fix(node: Node, want: int, op: str) -> Node:
        if want == 0:
            assert node[0] == "var"
            return node
        inner = "or" if op == "and" else "and"
        if node[0] != op:
            return (op, (fix(node, want - 1, inner),))
        return (op, tuple(fix(c, want - 1, inner) for c in node[1]))

    return fix(phi.root, depth, "and")


def _cnf_to_multi(nvars: int, clauses: list[frozenset[int]], k: int) -> MultiTapeInstance:
    """Base encoding: clause columns on one path tape per variable, swept in
    lockstep by k selected heads, then desynchronized with per-tuple phase
    letters and a phase tape."""
    m = len(clauses)
    tapes = []
    for v in range(nvars):
        content = tuple(1 if v in clause else 0 for clause in clauses)
        tapes.append(path_tape(content, number=range(1, m + 1)))
    bases = [1 + 3 * t for t in range(k)]
    tuples = []
    for t in range(k):
        tuples.append(tuple(_mod3_added(tape, bases[t]) for tape in tapes))
    phase = _phase_path(m, _triple_groups(bases))
    tuples.append((phase,))
    return MultiTapeInstance(sigma=1 + 3 * k, tuples=tuple(tuples), sync=False)


def _trivial_multi(positive: bool) -> MultiTapeInstance:
    tape = path_tape((1,) if positive else (0,))
    return MultiTapeInstance(sigma=1, tuples=((tape,),), sync=False)


def formula_to_multi(phi: NormalizedFormula, k: int) -> MultiTapeInstance:
    """Tape-selection instance positive iff phi has a weight-at-most-k model."""
    if k <= 0:
        return _trivial_multi(phi.evaluate(frozenset()))
    root = _canonical(phi)

    def build(node: Node) -> MultiTapeInstance:
        if _depth(node) == 2:
            clauses = [frozenset(v[1] for v in disj[1]) for disj in node[1]]
            return _cnf_to_multi(phi.nvars, clauses, k)
        conjuncts = []
        for disj in node[1]:
            conjuncts.append(or_compose([build(sub) for sub in disj[1]]))
        return and_compose(conjuncts)

    out = build(root)
    return MultiTapeInstance(
        sigma=out.sigma,
        tuples=out.tuples,
        sync=False,
        provenance={"construction": "formula", "k": k, "nvars": phi.nvars},
    )


# ---------------------------------------------------------------------------
# tapes -> dominating set reconfiguration

def tape_to_ts_dsr(inst: TapeInstance, connected: bool = False) -> DsrInstance:
    """Token sliding on the extended graph plus per-tape guards and a hub.

    Guard i is adjacent to all of tape i's cells, the hub to every cell, and
    a pendant leaf hangs off the hub; with an irreducible input, minimum
    dominating sets are exactly "hub + one head per tape", so token slides
    mirror head moves.
    """
    if inst.sync:
        raise MalformedInput("desynchronize before reducing to token sliding")
    if not is_irreducible(inst):
        raise MalformedInput("reduction requires an irreducible instance")
    ext = build_extended(inst)
    k = len(inst.tapes)
    g = ext.graph
    xs = []
    for i, t in enumerate(inst.tapes):
        g = add_vertex(g, [ext.cell_id(i, c) for c in range(t.cells.n)], f"guard:{i}")
        xs.append(g.n - 1)
    all_cells = [ext.cell_id(i, c) for i, t in enumerate(inst.tapes) for c in range(t.cells.n)]
    g = add_vertex(g, all_cells, "hub")
    y = g.n - 1
    g = add_vertex(g, [y], "hub-leaf")
    z = g.n - 1
    source = frozenset(ext.cell_id(i, c) for i, c in enumerate(inst.cs)) | {y}
    target = frozenset(ext.cell_id(i, c) for i, c in enumerate(inst.ct)) | {y}
    return DsrInstance(
        graph=g,
        k=k + 1,
        source=source,
        target=target,
        rule=SLIDE,
        connected=connected,
        provenance={
            "construction": "ts-dsr",
            "source": inst,
            "guards": tuple(xs),
            "hub": y,
            "leaf": z,
            "cell_base": ext.cell_base,
            "letter_base": ext.letter_base,
            "cell_count": ext.letter_base,
        },
    )


def tape_to_tj_cdsr(inst: TapeInstance) -> DsrInstance:
    """Connected dominating sets under token jumping, via edge subdivision.

    Every cell-cell edge is subdivided; the hub sees original cells only and
    guard i sees tape i's subdivided vertices only, so a budget of 3k+1
    connected tokens is forced into "hub + per tape: guard, one cell, one
    incident subdivided vertex".  Short tapes are padded with empty cells so
    the counting goes through.
    """
    if inst.sync:
        raise MalformedInput("desynchronize before reducing to token jumping")
    if not is_irreducible(inst):
        raise MalformedInput("reduction requires an irreducible instance")
    k = len(inst.tapes)
    # Every connected dominating set of size 3k+1 must keep one token on each
    # guard.  A tape abandoned by its guard has to dominate its own subdivided
    # vertices, and the budget leaves only 3 tokens per tape, so each tape
    # gets an empty 7-edge path appended: covering those 7 subdivided vertices
    # alone already costs 4 tokens.
    padded = []
    for t in inst.tapes:
        cells, content = t.cells, list(t.content)
        attach = t.end
        for _ in range(7):
            cells = add_vertex(cells, [attach])
            attach = cells.n - 1
            content.append(0)
        padded.append(Tape(cells, tuple(content), t.start, t.end))
    inst2 = TapeInstance(inst.sigma, tuple(padded), inst.cs, inst.ct)
    ext = build_extended(inst2)
    edges = []
    labels = dict(ext.graph.labels)
    n = ext.graph.n
    sub_of_tape: list[list[int]] = [[] for _ in range(k)]
    sub_by_cell: dict[int, list[int]] = {}
    for u, v in ext.graph.edges:
        if u in ext.tape_of and v in ext.tape_of:  # cell-cell edge: subdivide
            mid = n
            n += 1
            labels[mid] = f"mid:{ext.tape_of[u]}"
            sub_of_tape[ext.tape_of[u]].append(mid)
            sub_by_cell.setdefault(u, []).append(mid)
            sub_by_cell.setdefault(v, []).append(mid)
            edges.append((u, mid))
            edges.append((v, mid))
        else:
            edges.append((u, v))
    all_cells = sorted(ext.tape_of)
    hub = n
    labels[hub] = "hub"
    edges.extend((c, hub) for c in all_cells)
    n += 1
    guards = []
    for i in range(k):
        guard = n
        labels[guard] = f"guard:{i}"
        edges.extend((mid, guard) for mid in sub_of_tape[i])
        guards.append(guard)
        n += 1
    leaf = n
    labels[leaf] = "hub-leaf"
    edges.append((hub, leaf))
    n += 1
    g = Graph(n, edges, labels)

    def config(cells_: Sequence[int]) -> frozenset[int]:
        toks = {hub, *guards}
        for i, c in enumerate(cells_):
            vid = ext.cell_id(i, c)
            toks.add(vid)
            toks.add(min(sub_by_cell[vid]))
        return frozenset(toks)

    return DsrInstance(
        graph=g,
        k=3 * k + 1,
        source=config(inst2.cs),
        target=config(inst2.ct),
        rule=JUMP,
        connected=True,
        provenance={
            "construction": "tj-cdsr",
            "source": inst,
            "guards": tuple(guards),
            "hub": hub,
            "leaf": leaf,
            "cell_base": ext.cell_base,
            "letter_base": ext.letter_base,
        },
    )


def check_min_ds_structure(inst: DsrInstance) -> bool:
    """Certify the minimum-dominating-set shape of a sliding reduction output.

    All minimum dominating sets must have exactly guard-count+1 vertices,
    hold the hub or its leaf, one cell per tape, and no letter vertex.
    """
    prov = inst.provenance or {}
    if prov.get("construction") != "ts-dsr":
        raise MalformedInput("structure check needs a ts-dsr artifact")
    src: TapeInstance = prov["source"]
    k = len(src.tapes)
    hub, leaf = prov["hub"], prov["leaf"]
    cell_base, letter_base = prov["cell_base"], prov["letter_base"]
    letters = set(range(letter_base, letter_base + src.sigma))
    mins = minimum_dominating_sets(inst.graph, k + 1)
    if not mins or len(next(iter(mins))) != k + 1:
        return False
    spans = []
    for i, t in enumerate(src.tapes):
        spans.append(set(range(cell_base[i], cell_base[i] + t.cells.n)))
    for d in mins:
        if len(d & {hub, leaf}) != 1:
            return False
        if d & letters:
            return False
        for span in spans:
            if len(d & span) != 1:
                return False
    return True
