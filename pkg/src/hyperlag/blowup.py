"""Blowups of a base hypergraph and near-maximum blowups on n vertices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from .construct import construct_Gi
from .core import Hypergraph, covered_pairs
from .errors import DimensionMismatch, InvalidParameter, UnsupportedUniformity
from .lagrangian import closed_form_lambda, lagrangian

# |G_n^i| >= lambda * n^3 - LOWER_SLACK * n^2 at every n tried (t <= 3, n <= 90)
LOWER_SLACK = 40


def _check_parts(G: Hypergraph, parts: Sequence[int]) -> list[int]:
    sizes = [int(p) for p in parts]
    if len(sizes) != G.n:
        raise DimensionMismatch(f"{len(sizes)} part sizes for {G.n} vertices")
    if any(p < 0 for p in sizes):
        raise InvalidParameter("part sizes must be nonnegative")
    return sizes


def part_offsets(parts: Sequence[int]) -> list[int]:
    return [0, *itertools.accumulate(parts)]


def blowup(G: Hypergraph, parts: Sequence[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """Replace vertex ``i`` of ``G`` by ``parts[i]`` independent copies.

    Part ``i`` occupies the contiguous block ``offsets[i]:offsets[i+1]``.
    Returns the blown-up graph and the part index of each new vertex.
    """
    sizes = _check_parts(G, parts)
    off = part_offsets(sizes)
    blocks = [range(off[i], off[i + 1]) for i in range(G.n)]
    edges = set()
    for e in G.edges:
        edges.update(itertools.product(*(blocks[v] for v in e)))
    part_of = tuple(i for i, s in enumerate(sizes) for _ in range(s))
    # each product tuple is increasing because blocks follow vertex order
    return Hypergraph(G.r, off[-1], tuple(sorted(edges))), part_of


def blowup_edge_count(G: Hypergraph, parts: Sequence[int]) -> int:
    sizes = _check_parts(G, parts)
    total = 0
    for e in G.edges:
        prod = 1
        for v in e:
            prod *= sizes[v]
        total += prod
    return total


def _counts(E: np.ndarray, P: np.ndarray) -> np.ndarray:
    if E.shape[0] == 0:
        return np.zeros(P.shape[0], dtype=np.int64)
    return np.prod(P[:, E], axis=2).sum(axis=1)


def round_largest_remainder(x: Sequence[float], n: int) -> list[int]:
    """Integers summing to ``n`` closest to ``n * x``; ties go to the lower index."""
    x = np.asarray(x, dtype=float)
    target = n * x / x.sum() if x.sum() > 0 else np.full(x.size, n / max(x.size, 1))
    base = np.floor(target).astype(int)
    rem = target - base
    short = n - int(base.sum())
    order = sorted(range(x.size), key=lambda i: (-rem[i], i))
    for i in order[:short]:
        base[i] += 1
    return [int(v) for v in base]


def local_search_transfers(G: Hypergraph, sizes: Sequence[int], max_iters: int | None = None) -> tuple[list[int], int]:
    """Best-improvement hill climbing over single-unit moves between parts.

    Stops at a partition that no single move improves (or after
    ``max_iters`` moves). Ties go to the lexicographically smallest move.
    """
    p = np.asarray(sizes, dtype=np.int64)
    E = np.asarray(G.edges, dtype=np.intp).reshape(-1, G.r)
    m = G.n
    moves = [(i, j) for i in range(m) for j in range(m) if i != j]
    current = int(_counts(E, p[None, :])[0])
    steps = 0
    while max_iters is None or steps < max_iters:
        cand = [(i, j) for i, j in moves if p[i] > 0]
        if not cand:
            break
        P = np.repeat(p[None, :], len(cand), axis=0)
        idx = np.arange(len(cand))
        src = np.array([c[0] for c in cand])
        dst = np.array([c[1] for c in cand])
        P[idx, src] -= 1
        P[idx, dst] += 1
        vals = _counts(E, P)
        k = int(np.argmax(vals))
        if vals[k] <= current:
            break
        p = P[k]
        current = int(vals[k])
        steps += 1
    return [int(v) for v in p], current


def max_blowup(
    G: Hypergraph,
    n: int,
    local_search_iters: int | None = None,
    seed: int = 0,
    restarts: int = 64,
) -> tuple[list[int], int]:
    """A locally maximal blowup of ``G`` on ``n`` vertices.

    Rounds ``n`` times the optimizer's argmax, then climbs with single-unit
    transfers. The result is at least as good as the rounded start but is
    not guaranteed to be the global maximum.
    """
    if n < 0:
        raise InvalidParameter("n must be >= 0")
    if n == 0 or G.n == 0:
        return [0] * G.n, 0
    report = lagrangian(G, restarts=restarts, seed=seed)
    start = round_largest_remainder(report.argmax, n)
    return local_search_transfers(G, start, local_search_iters)


@dataclass(frozen=True)
class BlowupResult:
    graph: Hypergraph
    parts: tuple[int, ...]
    edge_count: int
    lower_bound: float
    upper_bound: float

    def sidecar(self) -> dict:
        return {"parts": list(self.parts), "edge_count": self.edge_count}


def construct_G_n_i(t: int, i: int, n: int, seed: int = 0, restarts: int = 64) -> BlowupResult:
    """Materialized maximum-edge blowup of ``construct_Gi(t, i)`` on ``n`` vertices.

    ``lower_bound`` is ``lambda * n^3 - LOWER_SLACK * n^2`` and
    ``upper_bound`` is ``lambda * n^3``, with lambda from the closed form.
    """
    G = construct_Gi(t, i)
    parts, count = max_blowup(G, n, seed=seed, restarts=restarts)
    H, _ = blowup(G, parts)
    lam = closed_form_lambda(t)
    return BlowupResult(H, tuple(parts), count, lam * n**3 - LOWER_SLACK * n**2, lam * n**3)


@dataclass(frozen=True)
class ShadowReport:
    edge_count: int
    density: float
    complete_multipartite: bool
    parts: tuple[tuple[int, ...], ...] | None

    def to_dict(self) -> dict:
        return {
            "edge_count": self.edge_count,
            "density": self.density,
            "complete_multipartite": self.complete_multipartite,
            "parts": None if self.parts is None else [list(p) for p in self.parts],
        }


def shadow_density_report(H: Hypergraph) -> ShadowReport:
    """Shadow size and density, and whether the shadow is complete multipartite.

    Candidate parts are the connected components of the shadow's complement;
    the shadow is complete multipartite iff each component is independent in
    the shadow (then every cross pair is an edge by construction).
    """
    if H.r != 3:
        raise UnsupportedUniformity("shadow report needs a 3-graph")
    pairs = covered_pairs(H)
    n = H.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in itertools.combinations(range(n), 2):
        if (u, v) not in pairs:
            parent[find(u)] = find(v)
    comps: dict[int, list[int]] = {}
    for v in range(n):
        comps.setdefault(find(v), []).append(v)
    parts = sorted(tuple(c) for c in comps.values())
    ok = all((u, v) not in pairs for c in parts for u, v in itertools.combinations(c, 2))
    density = len(pairs) / comb(n, 2) if n >= 2 else 0.0
    return ShadowReport(len(pairs), density, ok, tuple(parts) if ok else None)
