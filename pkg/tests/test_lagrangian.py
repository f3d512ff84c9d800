import itertools
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize

from hyperlag.blowup import blowup
from hyperlag.core import complete_hypergraph, complete_minus, empty_hypergraph, make_hypergraph
from hyperlag.errors import DimensionMismatch, GridTooLarge, InvalidParameter
from hyperlag.lagrangian import (
    blowup_bound_check,
    closed_form_lambda,
    kkt_check,
    lagrangian,
    lagrangian_grid_oracle,
    optimal_point,
    optimal_weights,
    poly_eval,
    poly_grad,
    poly_hessian,
    project_simplex,
)

from conftest import random_graph


def slsqp_lagrangian(H, starts=20, seed=1):
    """Independent optimizer: SLSQP from several Dirichlet starts."""
    rng = np.random.default_rng(seed)
    E = np.array(H.edges)

    def f(w):
        return -np.prod(w[E], axis=1).sum()

    best = 0.0
    cons = [{"type": "eq", "fun": lambda w: w.sum() - 1}]
    for _ in range(starts):
        w0 = rng.dirichlet(np.ones(H.n))
        res = minimize(f, w0, method="SLSQP", bounds=[(0, 1)] * H.n, constraints=cons,
                       options={"ftol": 1e-14, "maxiter": 1000})
        best = max(best, -res.fun)
    return best


def test_poly_eval_examples(edge, kminus1):
    assert poly_eval(edge, [1 / 3] * 3) == pytest.approx(1 / 27, abs=1e-15)
    assert poly_eval(kminus1, np.eye(6)[2]) == 0
    assert poly_eval(kminus1, optimal_point(1)) == pytest.approx(0.0886621079, abs=1e-10)


def test_poly_eval_dimension(edge):
    with pytest.raises(DimensionMismatch):
        poly_eval(edge, [0.5, 0.5])


def test_poly_grad_examples(edge, kminus1):
    assert np.allclose(poly_grad(edge, [1 / 3] * 3), 1 / 9, atol=1e-15)
    g = poly_grad(kminus1, optimal_point(1))
    assert np.ptp(g) < 1e-8


def test_batched_eval_matches_rows(rng):
    H = random_graph(rng, 7, 0.5)
    W = rng.dirichlet(np.ones(7), size=5)
    assert np.allclose(poly_eval(H, W), [poly_eval(H, w) for w in W])
    assert np.allclose(poly_grad(H, W), np.stack([poly_grad(H, w) for w in W]))


@given(st.integers(0, 10**6), st.integers(3, 8), st.floats(0.1, 1.0))
@settings(max_examples=60, deadline=None)
def test_euler_identity_and_finite_differences(seed, n, p):
    rng = np.random.default_rng(seed)
    H = random_graph(rng, n, p)
    w = rng.dirichlet(np.ones(n))
    g = poly_grad(H, w)
    assert g @ w == pytest.approx(3 * poly_eval(H, w), abs=1e-14)
    h = 1e-6
    fd = np.array([(poly_eval(H, w + h * e) - poly_eval(H, w - h * e)) / (2 * h) for e in np.eye(n)])
    assert np.allclose(fd, g, atol=1e-9)
    hess = poly_hessian(H, w)
    fdh = np.stack([(poly_grad(H, w + h * e) - poly_grad(H, w - h * e)) / (2 * h) for e in np.eye(n)])
    assert np.allclose(hess, fdh, atol=1e-7)


@given(st.integers(0, 10**6), st.integers(1, 9))
@settings(max_examples=60, deadline=None)
def test_projection_is_euclidean(seed, n):
    rng = np.random.default_rng(seed)
    y = rng.normal(size=n) * 3
    x = project_simplex(y[None, :])[0]
    assert x.min() >= 0 and x.sum() == pytest.approx(1, abs=1e-12)
    # optimality of the projection: <y - x, z - x> <= 0 for every vertex z of the simplex
    assert np.all((np.eye(n) - x) @ (y - x) <= 1e-10)


def test_closed_form_values():
    assert closed_form_lambda(1) == pytest.approx((4 * sqrt(6) - 9) / 9, abs=1e-15)
    assert closed_form_lambda(2) == pytest.approx((-3402 + 414 * sqrt(69)) / 324, abs=1e-12)
    assert closed_form_lambda(2) == pytest.approx(0.1140194, abs=1e-7)
    for t in range(1, 11):
        assert 0 < 6 * closed_form_lambda(t) < 1
    with pytest.raises(InvalidParameter):
        closed_form_lambda(0)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_closed_form_matches_optimum_point(t):
    a, b = optimal_weights(t)
    assert 3 * t * a + 3 * b == pytest.approx(1, abs=1e-15)
    assert poly_eval(complete_minus(t), optimal_point(t)) == pytest.approx(closed_form_lambda(t), abs=1e-14)


def test_optimal_point_layouts():
    base = optimal_point(1, "base")
    assert np.allclose(base, [0.1835034191] * 3 + [0.1498299143] * 3, atol=1e-10)
    mixed = optimal_point(1, "mixed")
    assert np.allclose(mixed, [0.0917517095] * 4 + [0.1835034191] + [0.1498299143] * 3, atol=1e-10)
    assert mixed.sum() == pytest.approx(1, abs=1e-15)
    with pytest.raises(InvalidParameter):
        optimal_point(1, "other")


def test_kkt_examples(edge, kminus1):
    assert kkt_check(edge, [1 / 3] * 3) < 1e-14
    assert kkt_check(kminus1, optimal_point(1)) < 1e-9
    assert kkt_check(kminus1, np.full(6, 1 / 6)) > 1e-6


def test_lagrangian_examples(fano, edge, kminus1):
    assert lagrangian(fano).value == pytest.approx(1 / 27, abs=1e-9)
    assert lagrangian(edge).value == pytest.approx(1 / 27, abs=1e-12)
    assert lagrangian(kminus1).value == pytest.approx(0.0886621079, abs=1e-8)
    rep = lagrangian(kminus1)
    assert rep.converged and rep.kkt_residual < 1e-9
    assert poly_eval(kminus1, rep.argmax) == pytest.approx(rep.value, abs=1e-15)


def test_lagrangian_degenerate():
    rep = lagrangian(empty_hypergraph(3, 4))
    assert rep.value == 0 and np.allclose(rep.argmax, 0.25)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_complete_graph_lagrangian(n):
    # uniform is optimal on K_n^3: C(n,3)/n^3
    expect = n * (n - 1) * (n - 2) / 6 / n**3
    assert lagrangian(complete_hypergraph(3, n)).value == pytest.approx(expect, abs=1e-12)


def test_lagrangian_deterministic(rng):
    H = random_graph(rng, 7, 0.4)
    assert lagrangian(H, seed=3) == lagrangian(H, seed=3)


def test_against_slsqp(rng):
    for _ in range(8):
        H = random_graph(rng, int(rng.integers(4, 8)), 0.5)
        ours = lagrangian(H).value
        assert ours >= slsqp_lagrangian(H) - 1e-9


def test_grid_oracle_examples(edge, k4, kminus1):
    assert lagrangian_grid_oracle(edge, 30) == 1 / 27
    assert lagrangian_grid_oracle(k4, 40) == 1 / 16
    assert abs(lagrangian_grid_oracle(kminus1, 60) - 0.0886621) <= 5e-3
    with pytest.raises(GridTooLarge):
        lagrangian_grid_oracle(complete_hypergraph(3, 12), 200)


def test_grid_oracle_matches_bruteforce(rng):
    H = random_graph(rng, 5, 0.6)
    res = 12
    best = 0.0
    for c in itertools.product(range(res + 1), repeat=4):
        if sum(c) <= res:
            best = max(best, poly_eval(H, np.array([*c, res - sum(c)]) / res))
    assert lagrangian_grid_oracle(H, res) == pytest.approx(best, abs=1e-15)


def test_lagrangian_monotone_under_edge_removal(rng):
    H = random_graph(rng, 7, 0.6)
    sub = make_hypergraph(3, 7, H.edges[::2])
    assert lagrangian(sub).value <= lagrangian(H).value + 1e-12


def test_blowup_bound_examples(edge, kminus1):
    assert blowup_bound_check(kminus1, kminus1)
    assert blowup_bound_check(edge, blowup(edge, (2, 2, 2))[0])
    G1 = complete_minus(1)
    rng = np.random.default_rng(5)
    lam = lagrangian(G1).value
    for _ in range(100):
        B, _ = blowup(G1, rng.integers(0, 4, size=6))
        assert blowup_bound_check(G1, B, lam)
