import itertools
import random

from hypothesis import given, settings, strategies as st

from reconflab.matching import max_bipartite_matching


def brute_force_matching_size(nl, nr, edges):
    """Max matching by exhaustive search over edge subsets (independent oracle)."""
    best = 0
    edges = list(edges)
    for size in range(min(nl, nr), 0, -1):
        for combo in itertools.combinations(edges, size):
            if len({u for u, _ in combo}) == size and len({v for _, v in combo}) == size:
                return size
    return best


def test_perfect_ladder():
    left = [f"l{i}" for i in range(4)]
    right = [f"r{i}" for i in range(4)]
    edges = [(f"l{i}", f"r{i}") for i in range(4)]
    m = max_bipartite_matching(left, right, edges)
    assert m == {f"l{i}": f"r{i}" for i in range(4)}


def test_empty_edges():
    assert max_bipartite_matching([1, 2], ["a"], []) == {}


def test_augmenting_needed():
    # l0 prefers r0 but must be flipped to r1 so l1 can take r0.
    m = max_bipartite_matching([0, 1], ["r0", "r1"], [(0, "r0"), (0, "r1"), (1, "r0")])
    assert m == {0: "r1", 1: "r0"}


def test_deterministic_reruns():
    rng = random.Random(7)
    left, right = list(range(6)), list("abcdef")
    edges = [(u, v) for u in left for v in right if rng.random() < 0.4]
    assert max_bipartite_matching(left, right, edges) == max_bipartite_matching(left, right, edges)


@given(st.integers(0, 2**15 - 1), st.integers(1, 6), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(seed, nl, nr):
    rng = random.Random(seed)
    left, right = list(range(nl)), [f"r{j}" for j in range(nr)]
    edges = [(u, v) for u in left for v in right if rng.random() < 0.45]
    got = max_bipartite_matching(left, right, edges)
    # got is a valid matching
    assert len(set(got.values())) == len(got)
    for u, v in got.items():
        assert (u, v) in edges
    assert len(got) == brute_force_matching_size(nl, nr, edges)
