import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hyperlag.blowup import blowup
from hyperlag.construct import construct_Gi
from hyperlag.core import complete_hypergraph, complete_minus, empty_hypergraph, make_hypergraph
from hyperlag.errors import NotTwoCovered, SearchBudgetExceeded, UniformityMismatch
from hyperlag.hom import (
    find_clique,
    find_homomorphism,
    greedy_clique,
    hom_free_equivalence_check,
    in_K_ell_family,
    is_colorable,
    is_F_free,
    mt_member,
    verify_homomorphism,
)

from conftest import random_graph


def naive_hom_exists(F, G, injective=False):
    """Enumerate all v(G)^v(F) maps at once and test every edge."""
    if F.n == 0:
        return True
    A = np.zeros((G.n,) * 3, dtype=bool)
    for e in G.edges:
        for p in itertools.permutations(e):
            A[p] = True
    maps = np.array(list(itertools.product(range(G.n), repeat=F.n)), dtype=np.intp).reshape(-1, F.n)
    ok = np.ones(len(maps), dtype=bool)
    for e in F.edges:
        ok &= A[maps[:, e[0]], maps[:, e[1]], maps[:, e[2]]]
    if injective:
        s = np.sort(maps, axis=1)
        ok &= np.all(s[:, 1:] != s[:, :-1], axis=1)
    return bool(ok.any())


def test_examples(edge, kminus1):
    assert find_homomorphism(edge, kminus1) is not None
    G1 = construct_Gi(1, 1)
    assert find_homomorphism(G1, G1) == tuple(range(8))
    assert find_homomorphism(complete_hypergraph(3, 9), G1) is None


def test_colorable_examples():
    G1 = construct_Gi(1, 1)
    assert is_colorable(blowup(G1, [2] * 8)[0], G1)
    assert not is_colorable(complete_hypergraph(3, 9), G1)
    assert is_colorable(empty_hypergraph(3, 4), G1)


def test_free_examples(kminus1):
    assert is_F_free(kminus1, complete_hypergraph(3, 6))
    assert not is_F_free(kminus1, complete_hypergraph(3, 5))
    assert not is_F_free(kminus1, empty_hypergraph(3, 3))


def test_uniformity_mismatch(edge):
    with pytest.raises(UniformityMismatch):
        find_homomorphism(edge, complete_hypergraph(2, 3))


def test_budget_is_enforced():
    G1 = construct_Gi(1, 1)
    with pytest.raises(SearchBudgetExceeded):
        find_homomorphism(G1, G1, injective=True, budget=2)


def test_no_edge_collapse():
    # a homomorphism may merge vertices but not inside an edge
    F = make_hypergraph(3, 4, [[0, 1, 2], [1, 2, 3]])
    G = make_hypergraph(3, 3, [[0, 1, 2]])
    phi = find_homomorphism(F, G)
    assert phi is not None and phi[0] == phi[3]
    assert find_homomorphism(F, G, injective=True) is None


@given(st.integers(0, 10**6), st.booleans())
@settings(max_examples=120, deadline=None)
def test_matches_naive_enumeration(seed, injective):
    rng = np.random.default_rng(seed)
    F = random_graph(rng, int(rng.integers(3, 6)), float(rng.uniform(0.1, 0.7)))
    G = random_graph(rng, int(rng.integers(3, 7)), float(rng.uniform(0.1, 0.9)))
    phi = find_homomorphism(F, G, injective=injective)
    assert (phi is not None) == naive_hom_exists(F, G, injective)
    if phi is not None:
        assert verify_homomorphism(F, G, phi, injective)


def test_equivalence_check(rng):
    K4 = complete_hypergraph(3, 4)
    for _ in range(20):
        assert hom_free_equivalence_check(random_graph(rng, 7, 0.4), [K4])
    # blowups of a K4-free graph stay K4-free
    base = make_hypergraph(3, 5, [[0, 1, 2], [0, 3, 4], [1, 3, 4]])
    B, _ = blowup(base, [2, 1, 2, 1, 2])
    assert hom_free_equivalence_check(B, [K4]) and is_F_free(B, K4)
    with pytest.raises(NotTwoCovered):
        hom_free_equivalence_check(B, [make_hypergraph(3, 4, [[0, 1, 2]])])


def greedy_covering(ell):
    """Add, greedily, the triple covering the most uncovered pairs."""
    uncovered = set(itertools.combinations(range(ell), 2))
    edges = []
    while uncovered:
        best = max(itertools.combinations(range(ell), 3),
                   key=lambda e: sum(p in uncovered for p in itertools.combinations(e, 2)))
        edges.append(best)
        uncovered -= set(itertools.combinations(best, 2))
    return edges


def test_in_K_ell_family(edge):
    assert in_K_ell_family(complete_hypergraph(3, 9), 9) is None
    cover = greedy_covering(9)
    assert len(cover) <= 36
    F = make_hypergraph(3, 12, cover)
    S = in_K_ell_family(F, 9)
    assert S == tuple(range(9))
    assert in_K_ell_family(edge, 3) == (0, 1, 2)
    # Steiner triple system on 7 points: 7 triples cover all 21 pairs
    fano = make_hypergraph(3, 7, [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]])
    assert in_K_ell_family(fano, 7) == tuple(range(7))


def test_clique_helpers():
    adj = [0b0110, 0b0101, 0b0011, 0b0000]
    assert find_clique(adj, 3) == (0, 1, 2)
    assert find_clique(adj, 4) is None
    assert greedy_clique(adj) == 3


def test_mt_member():
    assert mt_member(complete_hypergraph(3, 9), 1)
    assert not mt_member(construct_Gi(1, 1), 1)
    assert not mt_member(make_hypergraph(3, 3, [[0, 1, 2]]), 1)
    assert mt_member(complete_hypergraph(3, 12), 2)
    assert not mt_member(complete_hypergraph(3, 82), 1)
