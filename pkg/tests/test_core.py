import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from hyperlag.core import (
    Hypergraph,
    codegree,
    complete_hypergraph,
    complete_minus,
    covered_pairs,
    degree,
    empty_hypergraph,
    induced,
    is_2_covered,
    is_symmetric_pair,
    link,
    make_hypergraph,
    neighborhood,
    relabel,
    shadow,
)
from hyperlag.errors import (
    EdgeOutOfRange,
    EdgeWrongArity,
    InvalidParameter,
    UnsupportedUniformity,
)


@st.composite
def hypergraphs(draw, max_n=8):
    r = draw(st.integers(2, 3))
    n = draw(st.integers(r, max_n))
    combos = list(itertools.combinations(range(n), r))
    picks = draw(st.lists(st.sampled_from(combos), max_size=len(combos)))
    shuffled = [draw(st.permutations(list(e))) for e in picks]
    return r, n, shuffled


def test_single_edge():
    H = make_hypergraph(3, 3, [[0, 1, 2]])
    assert H.edges == ((0, 1, 2),) and H.n == 3 and len(H) == 1


def test_dedup_and_sort():
    H = make_hypergraph(3, 3, [[2, 1, 0], [0, 1, 2]])
    assert H.edges == ((0, 1, 2),)


def test_out_of_range():
    with pytest.raises(EdgeOutOfRange):
        make_hypergraph(3, 3, [[0, 1, 3]])


def test_wrong_arity():
    with pytest.raises(EdgeWrongArity):
        make_hypergraph(3, 4, [[0, 1]])
    with pytest.raises(EdgeWrongArity):
        make_hypergraph(3, 4, [[0, 1, 1]])


def test_complete_minus_sizes():
    assert (complete_minus(1).n, len(complete_minus(1))) == (6, 19)
    assert (complete_minus(2).n, len(complete_minus(2))) == (9, 83)
    K = complete_minus(1)
    missing = set(itertools.combinations(range(6), 3)) - set(K.edges)
    assert missing == {(3, 4, 5)}
    with pytest.raises(InvalidParameter):
        complete_minus(0)


def test_link_examples(edge, kminus1):
    assert link(edge, 0).edges == ((1, 2),)
    assert set(link(kminus1, 0).edges) == set(itertools.combinations(range(1, 6), 2))
    H = make_hypergraph(3, 4, [[0, 1, 2]])
    assert link(H, 3).edges == ()


def test_degree_codegree(kminus1):
    assert codegree(kminus1, 0, 1) == 4
    assert codegree(kminus1, 3, 4) == 3
    assert degree(kminus1, 0) == 10
    assert neighborhood(kminus1, 3, 4) == frozenset({0, 1, 2})
    with pytest.raises(UnsupportedUniformity):
        codegree(complete_hypergraph(4, 5), 0, 1)
    with pytest.raises(InvalidParameter):
        codegree(kminus1, 2, 2)


def test_shadow_examples(edge, kminus1):
    assert set(shadow(edge).edges) == {(0, 1), (0, 2), (1, 2)}
    assert len(shadow(empty_hypergraph(3, 4))) == 0
    assert set(shadow(kminus1).edges) == set(itertools.combinations(range(6), 2))


def test_induced(kminus1):
    assert len(induced(kminus1, {3, 4, 5})[0]) == 0
    assert len(induced(kminus1, {0, 1, 2})[0]) == 1
    same, old = induced(kminus1, range(6))
    assert same == kminus1 and old == tuple(range(6))


def test_symmetric_pairs(kminus1):
    assert is_symmetric_pair(kminus1, 0, 1)
    # vertex 3 lies in the missing triple, vertex 0 does not: {4,5} separates their links
    l0 = {frozenset(e) - {3} for e in kminus1.edges if 0 in e and 3 not in e}
    l3 = {frozenset(e) - {0} for e in kminus1.edges if 3 in e and 0 not in e}
    assert {frozenset(x - {0}) for x in l0} != {frozenset(x - {3}) for x in l3}
    assert not is_symmetric_pair(kminus1, 0, 3)
    assert is_symmetric_pair(kminus1, 3, 4) and is_symmetric_pair(kminus1, 1, 2)
    assert not is_symmetric_pair(make_hypergraph(3, 5, [[0, 1, 2], [1, 3, 4]]), 0, 3)


def test_two_covered(kminus1):
    assert is_2_covered(kminus1)
    assert not is_2_covered(make_hypergraph(3, 4, [[0, 1, 2]]))
    assert is_2_covered(empty_hypergraph(3, 1))


def test_json_rejects_garbage():
    with pytest.raises(InvalidParameter):
        Hypergraph.from_dict({"r": 3, "edges": []})


@given(hypergraphs())
@settings(max_examples=100, deadline=None)
def test_json_round_trip(data):
    r, n, edges = data
    H = make_hypergraph(r, n, edges)
    again = Hypergraph.from_json(H.to_json())
    assert again == H
    assert json.loads(H.to_json())["edges"] == sorted(sorted(e) for e in set(map(frozenset, edges)))


@given(hypergraphs())
@settings(max_examples=100, deadline=None)
def test_degree_sum_and_shadow(data):
    r, n, edges = data
    H = make_hypergraph(r, n, edges)
    assert sum(degree(H, v) for v in range(n)) == r * len(H)
    pairs = {p for e in H.edges for p in itertools.combinations(e, 2)}
    assert covered_pairs(H) == pairs
    if r == 3:
        assert set(shadow(H).edges) == pairs
        assert all(codegree(H, u, v) == sum(1 for e in H.edges if u in e and v in e)
                   for u, v in itertools.combinations(range(n), 2))


@given(hypergraphs(), st.randoms(use_true_random=False))
@settings(max_examples=50, deadline=None)
def test_relabel_preserves_structure(data, rnd):
    r, n, edges = data
    H = make_hypergraph(r, n, edges)
    perm = list(range(n))
    rnd.shuffle(perm)
    K = relabel(H, perm)
    assert len(K) == len(H)
    assert sorted(degree(K, perm[v]) for v in range(n)) == sorted(degree(H, v) for v in range(n))
    assert is_2_covered(K) == is_2_covered(H)
