import itertools

import numpy as np
import pytest

from hyperlag.core import complete_hypergraph, complete_minus, make_hypergraph

FANO_LINES = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [1, 4, 6], [2, 3, 6], [2, 4, 5]]


@pytest.fixture
def fano():
    return make_hypergraph(3, 7, FANO_LINES)


@pytest.fixture
def edge():
    return make_hypergraph(3, 3, [[0, 1, 2]])


@pytest.fixture
def kminus1():
    return complete_minus(1)


@pytest.fixture
def k4():
    return complete_hypergraph(3, 4)


def random_graph(rng, n, p, r=3):
    combos = list(itertools.combinations(range(n), r))
    return make_hypergraph(r, n, [e for e in combos if rng.random() < p])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
