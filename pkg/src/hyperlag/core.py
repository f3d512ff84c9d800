"""Immutable r-uniform hypergraphs and their basic combinatorics.

Vertices are the dense integers ``0..n-1``. Builders for graphs that are
usually drawn with 1-based labels subtract one from every label.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Iterable, Sequence

from .errors import (
    EdgeOutOfRange,
    EdgeWrongArity,
    InvalidParameter,
    UnsupportedUniformity,
)

Edge = tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """An r-graph on vertices ``0..n-1`` with a canonical edge tuple.

    Use :func:`make_hypergraph` to build one from untrusted input; the
    constructor assumes ``edges`` is already sorted, deduplicated and valid.
    """

    r: int
    n: int
    edges: tuple[Edge, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: Iterable[int]) -> bool:
        return tuple(sorted(edge)) in self.edge_set

    def __repr__(self) -> str:
        return f"Hypergraph(r={self.r}, n={self.n}, |E|={len(self.edges)})"

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[Edge, ...], ...]:
        """Edges through each vertex."""
        inc: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            for v in e:
                inc[v].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def pair_neighborhoods(self) -> dict[tuple[int, int], frozenset[int]]:
        """``{(u, v): N(u, v)}`` for every pair with positive codegree (r = 3)."""
        if self.r != 3:
            raise UnsupportedUniformity("pair neighbourhoods need r = 3")
        acc: dict[tuple[int, int], set[int]] = {}
        for a, b, c in self.edges:
            acc.setdefault((a, b), set()).add(c)
            acc.setdefault((a, c), set()).add(b)
            acc.setdefault((b, c), set()).add(a)
        return {k: frozenset(v) for k, v in acc.items()}

    def to_dict(self) -> dict:
        return {"r": self.r, "n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "Hypergraph":
        try:
            r, n, edges = data["r"], data["n"], data["edges"]
        except (KeyError, TypeError) as exc:
            raise InvalidParameter(f"hypergraph JSON needs r, n, edges: {exc}") from None
        return make_hypergraph(r, n, edges)

    @classmethod
    def from_json(cls, text: str) -> "Hypergraph":
        return cls.from_dict(json.loads(text))


def make_hypergraph(r: int, n: int, edges: Iterable[Sequence[int]]) -> Hypergraph:
    """Validate and canonicalize an edge list.

    Duplicate edges (in any vertex order) collapse silently. An edge with a
    repeated vertex is rejected, as is any vertex outside ``[0, n)``.
    """
    if not isinstance(r, int) or not isinstance(n, int) or isinstance(r, bool):
        raise InvalidParameter("r and n must be integers")
    if r < 2:
        raise InvalidParameter(f"uniformity must be >= 2, got {r}")
    if n < 0:
        raise InvalidParameter(f"vertex count must be >= 0, got {n}")
    canon: set[Edge] = set()
    for raw in edges:
        e = tuple(sorted(int(v) for v in raw))
        for v in e:
            if v < 0 or v >= n:
                raise EdgeOutOfRange(f"vertex {v} of edge {list(raw)} outside [0, {n})")
        if len(set(e)) != r or len(e) != r:
            raise EdgeWrongArity(f"edge {list(raw)} does not have {r} distinct vertices")
        canon.add(e)
    return Hypergraph(r, n, tuple(sorted(canon)))


def empty_hypergraph(r: int, n: int) -> Hypergraph:
    return make_hypergraph(r, n, [])


def complete_hypergraph(r: int, n: int) -> Hypergraph:
    return Hypergraph(r, n, tuple(itertools.combinations(range(n), r)))


def complete_minus(t: int) -> Hypergraph:
    """Complete 3-graph on ``3t+3`` vertices minus the edge ``{3t, 3t+1, 3t+2}``."""
    if t < 1:
        raise InvalidParameter(f"t must be >= 1, got {t}")
    m = 3 * t + 3
    missing = (3 * t, 3 * t + 1, 3 * t + 2)
    edges = tuple(e for e in itertools.combinations(range(m), 3) if e != missing)
    return Hypergraph(3, m, edges)


def _check_vertex(H: Hypergraph, v: int) -> None:
    if not 0 <= v < H.n:
        raise EdgeOutOfRange(f"vertex {v} outside [0, {H.n})")


def link(H: Hypergraph, v: int) -> Hypergraph:
    """The (r-1)-graph ``{E - v : v in E in H}`` on the same vertex set."""
    _check_vertex(H, v)
    edges = tuple(sorted(tuple(x for x in e if x != v) for e in H.incidence[v]))
    return Hypergraph(H.r - 1, H.n, edges)


def link_sets(H: Hypergraph, v: int) -> frozenset[Edge]:
    """Link of ``v`` as a set of (r-1)-tuples; works for every r."""
    _check_vertex(H, v)
    return frozenset(tuple(x for x in e if x != v) for e in H.incidence[v])


def degree(H: Hypergraph, v: int) -> int:
    _check_vertex(H, v)
    return len(H.incidence[v])


def _pair_key(H: Hypergraph, u: int, v: int) -> tuple[int, int]:
    if H.r != 3:
        raise UnsupportedUniformity(f"pair operations need r = 3, got r = {H.r}")
    _check_vertex(H, u)
    _check_vertex(H, v)
    if u == v:
        raise InvalidParameter("pair vertices must be distinct")
    return (u, v) if u < v else (v, u)


def neighborhood(H: Hypergraph, u: int, v: int) -> frozenset[int]:
    return H.pair_neighborhoods.get(_pair_key(H, u, v), frozenset())


def codegree(H: Hypergraph, u: int, v: int) -> int:
    return len(neighborhood(H, u, v))


def shadow(H: Hypergraph) -> Hypergraph:
    """All (r-1)-subsets covered by some edge, as an (r-1)-graph.

    For a 2-graph this is the 1-graph of non-isolated vertices.
    """
    sub: set[Edge] = set()
    for e in H.edges:
        sub.update(itertools.combinations(e, H.r - 1))
    return Hypergraph(H.r - 1, H.n, tuple(sorted(sub)))


def covered_pairs(H: Hypergraph) -> frozenset[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    for e in H.edges:
        pairs.update(itertools.combinations(e, 2))
    return frozenset(pairs)


def induced(H: Hypergraph, A: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """``H[A]`` relabelled onto ``0..|A|-1``.

    Returns the subgraph and ``old``, where new vertex ``i`` is old vertex
    ``old[i]`` (``old`` is ``A`` in increasing order).
    """
    old = tuple(sorted(set(A)))
    for v in old:
        _check_vertex(H, v)
    new = {v: i for i, v in enumerate(old)}
    edges = tuple(
        sorted(tuple(new[v] for v in e) for e in H.edges if all(v in new for v in e))
    )
    return Hypergraph(H.r, len(old), edges), old


def is_symmetric_pair(H: Hypergraph, u: int, v: int) -> bool:
    """True iff ``L(u) - v == L(v) - u``, where ``L(x) - y`` drops sets containing y."""
    if u == v:
        raise InvalidParameter("pair vertices must be distinct")
    lu = {s for s in link_sets(H, u) if v not in s}
    lv = {s for s in link_sets(H, v) if u not in s}
    return lu == lv


def is_2_covered(H: Hypergraph) -> bool:
    return len(covered_pairs(H)) == comb(H.n, 2)


def relabel(H: Hypergraph, image: Sequence[int], n: int | None = None) -> Hypergraph:
    """Apply an injective vertex map ``v -> image[v]``; target size defaults to ``H.n``."""
    n = H.n if n is None else n
    if len(image) != H.n or len(set(image)) != H.n:
        raise InvalidParameter("relabel needs an injective map defined on every vertex")
    return make_hypergraph(H.r, n, [[image[v] for v in e] for e in H.edges])
