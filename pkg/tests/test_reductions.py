import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from reconflab.dsr import JUMP, DsrInstance, is_feasible, solve
from reconflab.errors import MalformedInput
from reconflab.graphs import Graph, cycle_graph, degeneracy, dominates, min_feedback_vertex_set
from reconflab.reductions import (
    NormalizedFormula,
    and_compose,
    check_min_ds_structure,
    desynchronize_path,
    desynchronize_triangle,
    ds_to_sync_multi,
    formula_to_multi,
    or_compose,
    partitioned_dsr_to_sync_stars,
    select_from_tuples,
    tape_to_tj_cdsr,
    tape_to_ts_dsr,
    weighted_satisfiable,
)
from reconflab.tapes import (
    MultiTapeInstance,
    Tape,
    TapeInstance,
    extended_graph,
    is_irreducible,
    is_valid_configuration,
    path_tape,
    solve_multi,
    solve_tape,
    tape_is_path,
    validate_instance,
)


def connected_random_graph(rng, n, p=0.5):
    while True:
        g = Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])
        if g.is_connected():
            return g


def has_dominating_set(g, k):
    return any(
        dominates(g, set(c), range(g.n)) for c in itertools.combinations(range(g.n), k)
    )


def random_sync_path_instance(rng, max_tapes=3, max_cells=5, max_sigma=2):
    """Synchronized instance of position-numbered path tapes of equal length."""
    while True:
        sigma = rng.randint(1, max_sigma)
        p = rng.randint(1, max_tapes)
        m = rng.randint(2, max_cells)
        tapes = [
            path_tape(
                [sum(1 << l for l in range(sigma) if rng.random() < 0.6) for _ in range(m)],
                number=range(1, m + 1),
            )
            for _ in range(p)
        ]
        probe = TapeInstance(sigma, tuple(tapes), (0,) * p, (0,) * p, sync=True, r=m)
        cols = [j for j in range(m) if is_valid_configuration(probe, (j,) * p)]
        if len(cols) >= 2:
            js, jt = rng.sample(cols, 2)
            return TapeInstance(sigma, tuple(tapes), (js,) * p, (jt,) * p, sync=True, r=m)


def random_sync_general_instance(rng, max_tapes=3, max_cells=5, max_sigma=2):
    """Synchronized instance over random connected cell graphs, numbered by
    breadth-first layers from a root (adjacent layers differ by one)."""
    while True:
        sigma = rng.randint(1, max_sigma)
        p = rng.randint(1, max_tapes)
        tapes = []
        for _ in range(p):
            m = rng.randint(2, max_cells)
            edges = [(i, rng.randrange(i)) for i in range(1, m)]
            for u, v in itertools.combinations(range(m), 2):
                if rng.random() < 0.2:
                    edges.append((u, v))
            g = Graph(m, edges)
            dist = _bfs_layers(g, 0)
            number = [d + 1 for d in dist]
            content = [sum(1 << l for l in range(sigma) if rng.random() < 0.6) for _ in range(m)]
            tapes.append(Tape(g, tuple(content), 0, m - 1, tuple(number)))
        r = max(max(t.number) for t in tapes)
        if r < 2:
            continue
        probe = TapeInstance(sigma, tuple(tapes), (0,) * p, (0,) * p, sync=True, r=r)
        configs = []
        for number in range(1, min(max(t.number) for t in tapes) + 1):
            for combo in itertools.product(
                *[[c for c in range(t.cells.n) if t.number[c] == number] for t in tapes]
            ):
                if is_valid_configuration(probe, combo):
                    configs.append(combo)
        if len(configs) >= 2:
            cs, ct = rng.sample(configs, 2)
            return TapeInstance(sigma, tuple(tapes), cs, ct, sync=True, r=r)


def _bfs_layers(g, root):
    from collections import deque

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


# ------------------------------------------------------------- check encoding

def test_ds_check_c5_matches_drawn_pattern():
    g = cycle_graph(5)
    inst = ds_to_sync_multi(g, 2)
    assert len(inst.tuples) == 2 and all(len(t) == 5 for t in inst.tuples)
    marks = ["".join("x" if c else "." for c in t.content) for t in inst.tuples[0]]
    # frozen flat pattern: tape of vertex i marks the closed neighborhood column-wise
    assert marks == ["xx..x", "xxx..", ".xxx.", "..xxx", "x..xx"]


def test_ds_check_c5_positive_with_rotation_selection():
    res = solve_multi(ds_to_sync_multi(cycle_graph(5), 2))
    assert res.positive
    i, j = res.selection
    assert dominates(cycle_graph(5), {i, j}, range(5))


def test_ds_check_single_vertex():
    g = Graph(1, [])
    res = solve_multi(ds_to_sync_multi(g, 1))
    assert res.positive


def test_ds_check_extended_graph_counts():
    # five-cycle with two tokens: 2 tuples x 5 tapes x 5 cells plus one letter
    # vertex whose degree equals the total number of marks
    inst = ds_to_sync_multi(cycle_graph(5), 2)
    g = extended_graph(inst)
    assert g.n == 2 * 5 * 5 + 1
    marks = sum(
        bin(t.content[c]).count("1")
        for tup in inst.tuples
        for t in tup
        for c in range(t.cells.n)
    )
    letter_vertex = g.n - 1
    assert g.labels[letter_vertex] == "letter:0"
    assert g.degree(letter_vertex) == marks == 30


def test_ds_check_selected_heads_on_first_cells_valid():
    from reconflab.tapes import is_valid_configuration as valid

    inst = ds_to_sync_multi(cycle_graph(5), 2)
    chosen = inst.select((0, 2))  # the tapes of vertices 1 and 3 in 1-based terms
    assert valid(chosen, (0, 0))


def test_ds_check_c5_single_token_negative():
    assert not solve_multi(ds_to_sync_multi(cycle_graph(5), 1)).positive


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=25, deadline=None)
def test_ds_check_equals_subset_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    g = connected_random_graph(rng, n)
    k = rng.randint(1, min(3, n))
    assert solve_multi(ds_to_sync_multi(g, k)).positive == has_dominating_set(g, k)


# ------------------------------------------------------------- partitioned stars

def random_partitioned_instance(rng, n_max=5, k_max=2):
    while True:
        n = rng.randint(2, n_max)
        g = connected_random_graph(rng, n, 0.6)
        k = rng.randint(1, k_max)
        verts = list(range(n))
        rng.shuffle(verts)
        cuts = sorted(rng.sample(range(1, n), k - 1)) if k > 1 else []
        parts = []
        prev = 0
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


def test_stars_shape_and_validity():
    rng = random.Random(3)
    inst = random_partitioned_instance(rng)
    out = partitioned_dsr_to_sync_stars(inst)
    from reconflab.tapes import tape_is_subdivided_star

    assert validate_instance(out, expect_stars=True) == []
    assert all(tape_is_subdivided_star(t) for t in out.tapes)
    assert out.sigma == inst.k + 1
    # modulus covers the (possibly dummy-padded) vertex columns, multiple of 3
    assert out.r >= inst.graph.n + 1 and out.r % 3 == 0


def test_stars_single_vertex_positive():
    g = Graph(1, [])
    inst = DsrInstance(g, 1, frozenset({0}), frozenset({0}), JUMP, partition=(frozenset({0}),))
    out = partitioned_dsr_to_sync_stars(inst)
    assert solve_tape(out).reachable


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=20, deadline=None)
def test_stars_equivalence(seed):
    rng = random.Random(seed)
    inst = random_partitioned_instance(rng, n_max=4, k_max=2)
    out = partitioned_dsr_to_sync_stars(inst)
    assert solve_tape(out).reachable == solve(inst).reachable


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=10, deadline=None)
def test_full_hardness_chain_equivalence(seed):
    """partitioned jumping -> stars -> triangle -> sliding: one answer.

    This drives the desynchronizer over a wrapping numbering (the stars) and
    the sliding encoding over its output, so the whole pipeline is checked
    against the original instance rather than stage by stage.
    """
    rng = random.Random(seed)
    inst = random_partitioned_instance(rng, n_max=4, k_max=2)
    want = solve(inst).reachable
    stars = partitioned_dsr_to_sync_stars(inst)
    desynced = desynchronize_triangle(stars)
    assert is_irreducible(desynced)
    assert solve_tape(desynced).reachable == want
    sliding = tape_to_ts_dsr(desynced)
    assert solve(sliding).reachable == want


# ------------------------------------------------------------- desynchronizers

@given(st.integers(0, 2**15 - 1))
@settings(max_examples=30, deadline=None)
def test_triangle_desync_equivalence_and_irreducibility(seed):
    rng = random.Random(seed)
    inst = random_sync_general_instance(rng)
    out = desynchronize_triangle(inst)
    assert not out.sync
    assert is_irreducible(out)
    assert solve_tape(out).reachable == solve_tape(inst).reachable
    d_in = degeneracy(extended_graph(inst))[0]
    d_out = degeneracy(extended_graph(out))[0]
    assert d_out <= d_in + 2


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=30, deadline=None)
def test_path_desync_equivalence_all_paths(seed):
    rng = random.Random(seed)
    inst = random_sync_path_instance(rng)
    out = desynchronize_path(inst)
    assert all(tape_is_path(t) for t in out.tapes)
    assert solve_tape(out).reachable == solve_tape(inst).reachable


def test_path_desync_single_full_tape_stays_positive():
    t = path_tape([1, 1, 1], number=[1, 2, 3])
    inst = TapeInstance(1, (t,), (0,), (2,), sync=True, r=3)
    out = desynchronize_path(inst)
    assert solve_tape(out).reachable


def test_triangle_desync_phase_deficit_uniquely_coverable():
    rng = random.Random(11)
    inst = random_sync_general_instance(rng, max_tapes=2, max_cells=4)
    out = desynchronize_triangle(inst)
    res = solve_tape(out)
    if not res.reachable:
        return
    bases = out.provenance["triple_bases"]
    groups = 0
    for b in bases:
        groups |= 0b111 << b
    for config in res.witness:
        covered = 0
        for t, c in zip(out.tapes[:-1], config[:-1]):
            covered |= t.content[c]
        missing = groups & ~covered
        compatible = [c for c in range(3) if missing & ~out.tapes[-1].content[c] == 0]
        assert 1 <= len(compatible) <= 2
        # classes as the construction saw them (numbering flattens when r <= 3)
        mods = {1 if inst.r <= 3 else t.number[c] % 3
                for t, c in zip(inst.tapes, config[:-1])}
        if len(mods) > 1:
            assert len(compatible) == 1


# ------------------------------------------------------------- selector

def test_selector_contents_match_construction():
    t = path_tape([1, 1])
    multi = MultiTapeInstance(sigma=1, tuples=((t, t),))
    out = select_from_tuples(multi)
    sel = out.tapes[-1]
    full, a, s, e = 0b0001, 0b0010, 0b0100, 0b1000
    assert sel.content == (
        full | a | s | e,
        full | a | e,
        s | e,
        full | a | s,
        full | a | s | e,
    )


def random_multi(rng, max_tuples=2, max_members=2, max_cells=3, sigma=1):
    tuples = []
    for _ in range(rng.randint(1, max_tuples)):
        members = tuple(
            path_tape(
                [sum(1 << l for l in range(sigma) if rng.random() < 0.6)
                 for _ in range(rng.randint(1, max_cells))]
            )
            for _ in range(rng.randint(1, max_members))
        )
        tuples.append(members)
    return MultiTapeInstance(sigma=sigma, tuples=tuple(tuples))


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=30, deadline=None)
def test_selector_equivalence(seed):
    rng = random.Random(seed)
    multi = random_multi(rng)
    out = select_from_tuples(multi)
    assert all(tape_is_path(t) for t in out.tapes)
    assert len(out.tapes) == len(multi.tuples) + 1
    assert solve_tape(out).reachable == solve_multi(multi).positive


def test_selector_singletons_equal_flattened():
    t1, t2 = path_tape([1, 0]), path_tape([0, 1])
    multi = MultiTapeInstance(sigma=1, tuples=((t1,), (t2,)))
    out = select_from_tuples(multi)
    assert solve_tape(out).reachable == solve_multi(multi).positive


# ------------------------------------------------------------- and / or

def brute_force_and(insts):
    shapes = [range(len(t)) for t in insts[0].tuples]
    for sel in itertools.product(*shapes):
        ok = True
        for inst in insts:
            try:
                if not solve_tape(inst.select(sel)).reachable:
                    ok = False
                    break
            except MalformedInput:
                ok = False
                break
        if ok:
            return True
    return False


def test_and_single_input_equivalent():
    rng = random.Random(2)
    for _ in range(5):
        multi = random_multi(rng)
        out = and_compose([multi])
        assert solve_multi(out).positive == solve_multi(multi).positive


def test_or_single_input_equivalent():
    rng = random.Random(4)
    for _ in range(5):
        multi = random_multi(rng)
        out = or_compose([multi])
        assert solve_multi(out).positive == solve_multi(multi).positive


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=15, deadline=None)
def test_and_compose_equals_common_selection(seed):
    rng = random.Random(seed)
    shape = [rng.randint(1, 2) for _ in range(rng.randint(1, 2))]
    insts = []
    for _ in range(rng.randint(1, 2)):
        tuples = tuple(
            tuple(path_tape([rng.randint(0, 1) for _ in range(rng.randint(1, 2))])
                  for _ in range(sz))
            for sz in shape
        )
        insts.append(MultiTapeInstance(sigma=1, tuples=tuples))
    out = and_compose(insts)
    assert solve_multi(out).positive == brute_force_and(insts)


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=15, deadline=None)
def test_or_compose_equals_any_positive(seed):
    rng = random.Random(seed)
    shape = [rng.randint(1, 2) for _ in range(rng.randint(1, 2))]
    insts = []
    for _ in range(rng.randint(1, 2)):
        tuples = tuple(
            tuple(path_tape([rng.randint(0, 1) for _ in range(rng.randint(1, 2))])
                  for _ in range(sz))
            for sz in shape
        )
        insts.append(MultiTapeInstance(sigma=1, tuples=tuples))
    out = or_compose(insts)
    expected = any(solve_multi(i).positive for i in insts)
    assert solve_multi(out).positive == expected


def test_or_compose_preserves_selection_binding():
    # Tuple choices must mean the same thing in every branch: a conjunction of
    # two disjunctions sharing one tuple cannot be satisfied by mixing members.
    only_first = MultiTapeInstance(sigma=1, tuples=((path_tape([1]), path_tape([0])),))
    only_second = MultiTapeInstance(sigma=1, tuples=((path_tape([0]), path_tape([1])),))
    left = or_compose([only_first])
    right = or_compose([only_second])
    assert solve_multi(left).positive and solve_multi(right).positive
    assert not solve_multi(and_compose([left, right])).positive


def test_and_rejects_mismatched_shapes():
    a = MultiTapeInstance(sigma=1, tuples=((path_tape([1]),),))
    b = MultiTapeInstance(sigma=1, tuples=((path_tape([1]), path_tape([1])),))
    with pytest.raises(MalformedInput):
        and_compose([a, b])


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=8, deadline=None)
def test_nested_composition_of_raw_instances(seed):
    """or over and over raw tuple instances, against the brute-force oracle."""
    rng = random.Random(seed)
    shape = [rng.randint(1, 2)]

    def make():
        tuples = tuple(
            tuple(path_tape([rng.randint(0, 1)]) for _ in range(sz))
            for sz in shape
        )
        return MultiTapeInstance(sigma=1, tuples=tuples)

    groups = [[make() for _ in range(rng.randint(1, 2))] for _ in range(2)]
    composed = or_compose([and_compose(g) for g in groups])

    def group_solved(group, sel):
        for inst in group:
            try:
                if not solve_tape(inst.select(sel)).reachable:
                    return False
            except MalformedInput:
                return False
        return True

    expected = any(
        group_solved(group, sel)
        for group in groups
        for sel in itertools.product(*(range(s) for s in shape))
    )
    assert solve_multi(composed).positive == expected


# ------------------------------------------------------------- formulas

def AND(*children):
    return ("and", tuple(children))


def OR(*children):
    return ("or", tuple(children))


def VAR(i):
    return ("var", i)


def test_formula_two_clause_cnf():
    phi = NormalizedFormula(3, AND(OR(VAR(0), VAR(1)), OR(VAR(1), VAR(2))))
    assert weighted_satisfiable(phi, 1)  # x1 alone satisfies both clauses
    assert solve_multi(formula_to_multi(phi, 1)).positive
    assert not solve_multi(formula_to_multi(phi, 0)).positive


def test_formula_weight_zero_negative():
    phi = NormalizedFormula(2, AND(OR(VAR(0))))
    assert not weighted_satisfiable(phi, 0)
    assert not solve_multi(formula_to_multi(phi, 0)).positive


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=12, deadline=None)
def test_formula_depth2_matches_truth_table(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    clauses = []
    for _ in range(rng.randint(1, 3)):
        size = rng.randint(1, min(2, n))
        clauses.append(OR(*[VAR(v) for v in rng.sample(range(n), size)]))
    phi = NormalizedFormula(n, AND(*clauses))
    k = rng.randint(1, 2)
    assert solve_multi(formula_to_multi(phi, k)).positive == weighted_satisfiable(phi, k)


@given(st.integers(0, 2**15 - 1))
@settings(max_examples=6, deadline=None)
def test_formula_depth3_matches_truth_table(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 3)

    def cnf():
        return AND(*[OR(*[VAR(v) for v in rng.sample(range(n), rng.randint(1, 2))])
                     for _ in range(rng.randint(1, 2))])

    phi = NormalizedFormula(n, AND(*[OR(*[cnf() for _ in range(rng.randint(1, 2))])
                                     for _ in range(rng.randint(1, 2))]))
    k = rng.randint(1, 2)
    assert solve_multi(formula_to_multi(phi, k)).positive == weighted_satisfiable(phi, k)


def test_formula_rejects_broken_alternation():
    with pytest.raises(MalformedInput):
        NormalizedFormula(2, AND(AND(VAR(0))))
    with pytest.raises(MalformedInput):
        NormalizedFormula(1, OR(VAR(0)))


def test_formula_two_nested_composition_rounds():
    # depth six: the conjunction/disjunction composers stack twice
    phi = NormalizedFormula(1, AND(OR(AND(OR(AND(OR(VAR(0))))))))
    assert phi.depth() == 6
    assert not solve_multi(formula_to_multi(phi, 0)).positive
    assert solve_multi(formula_to_multi(phi, 1)).positive


def test_formula_mixed_depth_siblings_are_padded():
    # one disjunct is a bare variable, the other a full sub-formula: the
    # canonicalizer must pad shapes so the composers line up
    phi = NormalizedFormula(2, AND(OR(VAR(0), AND(OR(VAR(1))))))
    for k in (0, 1, 2):
        assert solve_multi(formula_to_multi(phi, k)).positive == weighted_satisfiable(phi, k)


# ------------------------------------------------------------- tape -> DSR

def small_irreducible_instances(count, seed=0, max_tapes=2, max_cells=3, max_sigma=2):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        inst = random_sync_general_instance(rng, max_tapes, max_cells, max_sigma)
        art = desynchronize_triangle(inst)
        assert is_irreducible(art)
        out.append(art)
    return out


def test_ts_dsr_requires_irreducible():
    t1 = path_tape([3, 0])
    t2 = path_tape([1, 2])
    inst = TapeInstance(2, (t1, t2), (0, 0), (0, 1))
    assert not is_irreducible(inst)
    with pytest.raises(MalformedInput):
        tape_to_ts_dsr(inst)


def test_ts_dsr_equivalence_structure_and_bounds():
    for art in small_irreducible_instances(6, seed=42):
        dsr = tape_to_ts_dsr(art)
        assert solve(dsr).reachable == solve_tape(art).reachable
        assert check_min_ds_structure(dsr)
        d_in = degeneracy(extended_graph(art))[0]
        assert degeneracy(dsr.graph)[0] <= d_in + 2
        f_in = len(min_feedback_vertex_set(extended_graph(art)))
        k = len(art.tapes)
        assert len(min_feedback_vertex_set(dsr.graph)) <= f_in + k + 1


def test_ts_dsr_connected_variant_equivalence():
    for art in small_irreducible_instances(4, seed=77):
        cdsr = tape_to_ts_dsr(art, connected=True)
        assert solve(cdsr).reachable == solve_tape(art).reachable


def test_ts_dsr_reachable_states_keep_hub_cover():
    art = small_irreducible_instances(1, seed=9)[0]
    dsr = tape_to_ts_dsr(art)
    hub, leaf = dsr.provenance["hub"], dsr.provenance["leaf"]
    from collections import deque

    from reconflab.dsr import successors

    seen = {dsr.source}
    queue = deque([dsr.source])
    while queue:
        cur = queue.popleft()
        for nxt in successors(dsr, cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    for d in seen:
        assert d & {hub, leaf}
        if leaf in d:  # the swap onto the hub is always available
            assert is_feasible(dsr, (d - {leaf}) | {hub})


def test_check_min_ds_structure_single_tape_single_letter():
    inst = TapeInstance(1, (path_tape([1, 1]),), (0,), (1,))
    assert is_irreducible(inst)
    dsr = tape_to_ts_dsr(inst)
    assert check_min_ds_structure(dsr)
    assert solve(dsr).reachable


def test_check_min_ds_structure_fails_with_universal_vertex():
    art = small_irreducible_instances(1, seed=5)[0]
    dsr = tape_to_ts_dsr(art)
    g = dsr.graph
    g2 = Graph(
        g.n + 1,
        list(g.edges) + [(v, g.n) for v in range(g.n)],
        g.labels,
    )
    mutated = DsrInstance(
        g2, dsr.k, dsr.source, dsr.target, dsr.rule, provenance=dsr.provenance
    )
    assert not check_min_ds_structure(mutated)


def test_tj_cdsr_equivalence_and_guard_containment():
    from reconflab.dsr import _induces_connected, enumerate_dominating_sets
    from reconflab.graphs import mask_of

    for art in small_irreducible_instances(4, seed=13, max_tapes=1, max_cells=3):
        cd = tape_to_tj_cdsr(art)
        assert solve(cd).reachable == solve_tape(art).reachable
        k = len(art.tapes)
        guards = set(cd.provenance["guards"])
        hub, leaf = cd.provenance["hub"], cd.provenance["leaf"]
        # subdivided vertices have degree 3: two cells plus the guard
        for v, lab in cd.graph.labels.items():
            if lab.startswith("mid:"):
                assert cd.graph.degree(v) == 3
        for d in enumerate_dominating_sets(cd.graph, 3 * k + 1):
            if _induces_connected(cd.graph, mask_of(d)):
                assert guards <= d
                assert len(d & {hub, leaf}) == 1
