"""Finite, checkable consequences of the construction, run as one report.

Every check returns a :class:`Check` with a pass flag and the measured
values. Nothing here records wall-clock time, so a report is a pure
function of ``(t_max, seed, restarts, tol, budget)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, sqrt
from typing import Callable

import numpy as np

from .blowup import blowup, construct_G_n_i, shadow_density_report
from .construct import construct_Gi, quotient, verify_codegree_table
from .core import (
    Hypergraph,
    complete_hypergraph,
    complete_minus,
    is_2_covered,
    make_hypergraph,
)
from .hom import find_homomorphism, is_colorable, is_F_free, mt_member
from .lagrangian import (
    closed_form_lambda,
    kkt_check,
    lagrangian,
    lagrangian_grid_oracle,
    optimal_point,
    poly_eval,
    poly_grad,
)


@dataclass
class Check:
    key: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed,
                "measured": self.measured}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    restarts: int = 64
    tol: float = 1e-12
    budget: int = 10**8

    def __post_init__(self):
        if self.restarts < 1 or self.tol <= 0 or self.budget < 1:
            raise ValueError("need restarts >= 1, tol > 0, budget >= 1")


def _lag(H: Hypergraph, cfg: RunConfig, **kw):
    return lagrangian(H, restarts=cfg.restarts, tol=cfg.tol, seed=cfg.seed, **kw)


def single_edge() -> Hypergraph:
    return make_hypergraph(3, 3, [[0, 1, 2]])


def random_3graph(rng: np.random.Generator, n: int, p: float) -> Hypergraph:
    triples = list(itertools.combinations(range(n), 3))
    keep = rng.random(len(triples)) < p
    return make_hypergraph(3, n, [e for e, k in zip(triples, keep) if k])


def random_2covered(rng: np.random.Generator, n: int, p: float) -> Hypergraph:
    """Random 3-graph on ``n >= 3`` vertices, patched so every pair is covered."""
    H = random_3graph(rng, n, p)
    edges = set(H.edges)
    covered = {q for e in edges for q in itertools.combinations(e, 2)}
    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in covered:
            w = int(rng.choice([x for x in range(n) if x not in (u, v)]))
            e = tuple(sorted((u, v, w)))
            edges.add(e)
            covered.update(itertools.combinations(e, 2))
    return make_hypergraph(3, n, edges)


def _ts(t_max: int, cap: int = 3) -> list[int]:
    return list(range(1, min(t_max, cap) + 1))


def check_irrational_lagrangian(t_max: int, cfg: RunConfig) -> Check:
    out, ok = {}, True
    for t in _ts(t_max):
        K = complete_minus(t)
        lam = closed_form_lambda(t)
        for label, seeded in (("seeded", True), ("unseeded", False)):
            rep = _lag(K, cfg, seed_candidates=seeded)
            diff = abs(rep.value - lam)
            ok &= diff < 1e-8
            out[f"t={t}/{label}"] = {"value": rep.value, "closed_form": lam, "abs_diff": diff}
    exact = (4 * sqrt(6) - 9) / 9
    ok &= abs(closed_form_lambda(1) - exact) < 1e-15
    out["t=1 (4*sqrt(6)-9)/9"] = exact
    return Check("C1", "optimizer matches the closed-form Lagrangian", ok, out)


def _sorted_within_classes(w: np.ndarray, t: int) -> np.ndarray:
    return np.concatenate([np.sort(w[: 3 * t]), np.sort(w[3 * t:])])


def check_optimum_point(t_max: int, cfg: RunConfig) -> Check:
    out, ok = {}, True
    for t in _ts(t_max):
        K = complete_minus(t)
        x = optimal_point(t, "base")
        res = kkt_check(K, x)
        ok &= res < 1e-9
        entry = {"kkt_residual": res}
        for label, seeded in (("seeded", True), ("unseeded", False)):
            rep = _lag(K, cfg, seed_candidates=seeded)
            dev = float(np.max(np.abs(_sorted_within_classes(rep.argmax, t) - x)))
            ok &= dev < 1e-5
            entry[f"argmax_dev/{label}"] = dev
        out[f"t={t}"] = entry
    return Check("C2", "analytic optimum is stationary and found by the optimizer", ok, out)


def check_lagrangian_preserved(t_max: int, cfg: RunConfig) -> Check:
    out, ok = {}, True
    for t in _ts(t_max):
        lam = closed_form_lambda(t)
        for i in range(1, min(t, 3 * t - 1) + 1):
            G = construct_Gi(t, i)
            for label, seeded in (("seeded", True), ("unseeded", False)):
                d = abs(_lag(G, cfg, seed_candidates=seeded).value - lam)
                ok &= d < 1e-7
                out[f"t={t},i={i}/{label}"] = d
            lifted = abs(poly_eval(G, optimal_point(t, "mixed")) - lam)
            ok &= lifted < 1e-10
            out[f"t={t},i={i}/lifted_point"] = lifted
    return Check("C3", "mix-crossed blowup preserves the Lagrangian", ok, out)


def check_structure(t_max: int, cfg: RunConfig) -> Check:
    out, ok = {}, True
    for t in _ts(t_max):
        for i in range(1, min(t, 3 * t - 1) + 1):
            G = construct_Gi(t, i)
            good = G.n == 3 * t + 5 and is_2_covered(G)
            ok &= good
            out[f"t={t},i={i}"] = {"vertices": G.n, "edges": len(G), "2_covered": is_2_covered(G)}
    n_edges = len(construct_Gi(1, 1))
    ok &= n_edges == 43
    out["|G_1| at t=1"] = n_edges
    return Check("C4", "G_i has 3t+5 vertices, is 2-covered, |G_1|=43 at t=1", ok, out)


def check_codegrees(t_max: int, cfg: RunConfig) -> Check:
    out = {f"t={t}": verify_codegree_table(t) for t in _ts(t_max)}
    return Check("C5", "codegree table of G_1 matches the five cases", all(out.values()), out)


def check_blowup_bound(t_max: int, cfg: RunConfig, trials: int = 500) -> Check:
    fixtures = {
        "single_edge": single_edge(),
        "K4": complete_hypergraph(3, 4),
        "K6_minus": complete_minus(1),
        "G1": construct_Gi(1, 1),
    }
    lams = {name: _lag(G, cfg).value for name, G in fixtures.items()}
    rng = np.random.default_rng([cfg.seed, 6])
    names = list(fixtures)
    ok, worst = True, -np.inf
    for k in range(trials):
        name = names[k % len(names)]
        G = fixtures[name]
        parts = rng.integers(0, 5, size=G.n)
        if parts.sum() == 0:
            parts[0] = 1
        B, _ = blowup(G, parts)
        nr = B.n**3
        ok &= len(B) <= lams[name] * nr + 1e-6 * nr
        worst = max(worst, (len(B) - lams[name] * nr) / nr)
    tight = {}
    for k in (1, 2, 3, 5):
        B, _ = blowup(fixtures["single_edge"], [k, k, k])
        gap = lams["single_edge"] * B.n**3 - len(B)
        tight[k] = gap
        ok &= abs(gap) <= 1e-6 * B.n**3
    return Check("C6", "blowups never beat lambda * n^3; single edge is tight", ok,
                 {"trials": trials, "max (|B| - lambda n^3)/n^3": worst, "single_edge_gap": tight})


def check_density_finite_n(t_max: int, cfg: RunConfig) -> Check:
    lam6 = 6 * closed_form_lambda(1)
    out, ok = {"6*lambda": lam6}, True
    gaps = []
    for n in (30, 60, 90):
        R = construct_G_n_i(1, 1, n, seed=cfg.seed, restarts=cfg.restarts)
        d = 6 * R.edge_count / n**3
        inside = lam6 - 12 / n <= d <= lam6
        ok &= inside
        gaps.append(lam6 - d)
        out[f"n={n}"] = {"edges": R.edge_count, "parts": list(R.parts), "density": d,
                         "gap": lam6 - d, "in_window": inside}
    mono = all(a > b for a, b in zip(gaps, gaps[1:]))
    out["monotone_gap"] = mono
    return Check("C7", "6|G_n^1|/n^3 within [6 lambda - 12/n, 6 lambda], gap shrinking in n",
                 ok and mono, out)


def check_mt_oracle(t_max: int, cfg: RunConfig) -> Check:
    cases = [("K9", complete_hypergraph(3, 9), 1, True),
             ("G1", construct_Gi(1, 1), 1, False),
             ("single_edge", single_edge(), 1, False)]
    if t_max >= 2:
        cases.append(("K12", complete_hypergraph(3, 12), 2, True))
    out, ok = {}, True
    for name, F, t, want in cases:
        got = mt_member(F, t, budget=cfg.budget)
        ok &= got == want
        out[f"{name},t={t}"] = got
    return Check("C8", "membership oracle for the forbidden family", ok, out)


def check_hom_duality(t_max: int, cfg: RunConfig, trials: int = 500) -> Check:
    rng = np.random.default_rng([cfg.seed, 9])
    agree = 0
    contains = 0
    for _ in range(trials):
        H = random_3graph(rng, int(rng.integers(3, 8)), float(rng.uniform(0.2, 0.9)))
        F = random_2covered(rng, int(rng.integers(3, 6)), float(rng.uniform(0.0, 0.6)))
        free = is_F_free(H, F, cfg.budget)
        hom_free = not is_colorable(F, H, cfg.budget)
        agree += free == hom_free
        contains += not free
    return Check("C9", "F-free equals F-hom-free for 2-covered F", agree == trials,
                 {"trials": trials, "agreeing": agree, "instances_containing_F": contains})


def oracle_fixtures(seed: int) -> dict[str, Hypergraph]:
    rng = np.random.default_rng([seed, 10])
    fx = {
        "single_edge": single_edge(),
        "K4": complete_hypergraph(3, 4),
        "K4_minus": make_hypergraph(3, 4, [[0, 1, 2], [0, 1, 3], [0, 2, 3]]),
        "K5": complete_hypergraph(3, 5),
        "K6_minus": complete_minus(1),
    }
    for k in range(3):
        fx[f"random6_{k}"] = random_3graph(rng, 6, 0.5)
    return fx


def check_oracle_equivalence(t_max: int, cfg: RunConfig, resolution: int = 60) -> Check:
    out, ok = {}, True
    for name, H in oracle_fixtures(cfg.seed).items():
        val = _lag(H, cfg).value
        grid = lagrangian_grid_oracle(H, resolution)
        good = abs(val - grid) <= 5e-3 and val >= grid - 1e-12
        ok &= good
        out[name] = {"optimizer": val, "grid": grid, "diff": val - grid}
    return Check("C10", "optimizer within 5e-3 of, and never below, the grid oracle", ok, out)


def check_gradient(t_max: int, cfg: RunConfig, trials: int = 200, h: float = 1e-6) -> Check:
    rng = np.random.default_rng([cfg.seed, 11])
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(3, 9))
        H = random_3graph(rng, n, float(rng.uniform(0.2, 1.0)))
        w = rng.dirichlet(np.ones(n))
        g = poly_grad(H, w)
        for i in range(n):
            e = np.zeros(n)
            e[i] = h
            fd = (poly_eval(H, w + e) - poly_eval(H, w - e)) / (2 * h)
            worst = max(worst, abs(fd - g[i]) / max(abs(g[i]), 1e-3))
    return Check("C11", "gradient agrees with central differences", worst <= 1e-6,
                 {"trials": trials, "worst_relative_error": worst})


def check_shadow(t_max: int, cfg: RunConfig) -> Check:
    out, ok = {}, True
    for t in _ts(t_max, cap=2):
        for n in (20, 40):
            R = construct_G_n_i(t, 1, n, seed=cfg.seed, restarts=cfg.restarts)
            S = shadow_density_report(R.graph)
            good = S.complete_multipartite and len(S.parts) == 3 * t + 5
            ok &= good
            counts = []
            for i in range(1, t + 1):
                B, _ = blowup(construct_Gi(t, i), R.parts)
                counts.append(shadow_density_report(B).edge_count)
            same = len(set(counts)) == 1
            ok &= same
            out[f"t={t},n={n}"] = {"parts": len(S.parts) if S.parts else None,
                                   "complete_multipartite": S.complete_multipartite,
                                   "shadow_edges_by_i": counts}
    return Check("C12", "shadow of G_n^i is complete (3t+5)-partite, equal across i", ok, out)


def check_round_trip(t_max: int, cfg: RunConfig, trials: int = 20) -> Check:
    rng = np.random.default_rng([cfg.seed, 13])
    pairs = [(t, i) for t in _ts(t_max) for i in range(1, t + 1)]
    ok_count = 0
    for k in range(trials):
        t, i = pairs[k % len(pairs)]
        G = construct_Gi(t, i)
        parts = rng.integers(1, 4, size=G.n)
        T, _ = quotient(blowup(G, parts)[0])
        there = find_homomorphism(G, T, injective=True, budget=cfg.budget)
        back = find_homomorphism(T, G, injective=True, budget=cfg.budget)
        ok_count += there is not None and back is not None and T.n == G.n and len(T) == len(G)
    return Check("C13", "quotient of a blowup of G_i is isomorphic to G_i",
                 ok_count == trials, {"trials": trials, "isomorphic": ok_count})


CHECKS: list[Callable[[int, RunConfig], Check]] = [
    check_irrational_lagrangian,
    check_optimum_point,
    check_lagrangian_preserved,
    check_structure,
    check_codegrees,
    check_blowup_bound,
    check_density_finite_n,
    check_mt_oracle,
    check_hom_duality,
    check_oracle_equivalence,
    check_gradient,
    check_shadow,
    check_round_trip,
]


def run_all(t_max: int = 3, cfg: RunConfig | None = None) -> list[Check]:
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    cfg = cfg or RunConfig()
    return [check(t_max, cfg) for check in CHECKS]
