"""Mix-crossed blowups, the graphs G_i, symmetrization and edit distance."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Hypergraph,
    codegree,
    complete_minus,
    induced,
    link_sets,
    make_hypergraph,
    neighborhood,
)
from .errors import (
    CodegreeTooSmall,
    DimensionMismatch,
    InvalidParameter,
    PairNotPresent,
    UnsupportedUniformity,
)


@dataclass(frozen=True)
class MixCrossSpec:
    """Crossed pair ``{v1, v2}``, crossing counts ``a``, ``b`` and an ordering of N(v1, v2)."""

    v1: int
    v2: int
    a: int
    b: int
    ordering: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"v1": self.v1, "v2": self.v2, "a": self.a, "b": self.b,
                "ordering": list(self.ordering)}

    @classmethod
    def from_dict(cls, data: dict) -> "MixCrossSpec":
        return cls(int(data["v1"]), int(data["v2"]), int(data["a"]), int(data["b"]),
                   tuple(int(u) for u in data["ordering"]))

    @classmethod
    def canonical(cls, G: Hypergraph, v1: int, v2: int, a: int, b: int) -> "MixCrossSpec":
        """Crossing whose ordering lists the common neighbourhood in increasing label order."""
        return cls(v1, v2, a, b, tuple(sorted(neighborhood(G, v1, v2))))


def _validate_spec(G: Hypergraph, spec: MixCrossSpec) -> None:
    if G.r != 3:
        raise UnsupportedUniformity("mix-crossed blowup is defined for 3-graphs")
    if spec.v1 == spec.v2:
        raise InvalidParameter("v1 and v2 must differ")
    if spec.a < 1 or spec.b < 1:
        raise InvalidParameter("crossing counts a and b must be positive")
    common = neighborhood(G, spec.v1, spec.v2)
    k = len(common)
    if k == 0:
        raise PairNotPresent(f"pair {{{spec.v1}, {spec.v2}}} lies in no edge")
    if k < spec.a + spec.b + 1:
        raise CodegreeTooSmall(
            f"codegree {k} < a + b + 1 = {spec.a + spec.b + 1}"
        )
    if len(spec.ordering) != k or set(spec.ordering) != common:
        raise InvalidParameter("ordering must be a permutation of the common neighbourhood")


def mix_crossed_blowup(G: Hypergraph, spec: MixCrossSpec) -> Hypergraph:
    """The (a, b)-mix-crossed blowup of ``G`` on ``{v1, v2}``.

    The clones ``v1'`` and ``v2'`` become vertices ``n`` and ``n + 1``. For
    ``i > a + b`` the fourth added edge is ``u_i v2 v2'``, with the same
    ``u_i`` as the other three, which keeps ``{v2, v2'}`` covered.
    """
    _validate_spec(G, spec)
    v1, v2 = spec.v1, spec.v2
    c1, c2 = G.n, G.n + 1
    kept = [e for e in G.edges if not (v1 in e and v2 in e)]
    edges: list[tuple[int, ...]] = list(kept)
    for e in kept:
        if v1 in e:
            edges.append(tuple(c1 if x == v1 else x for x in e))
        if v2 in e:
            edges.append(tuple(c2 if x == v2 else x for x in e))
    for i, u in enumerate(spec.ordering, start=1):
        if i <= spec.a:
            pairs = [(v1, v2), (v1, c2), (c1, v2), (c1, c2)]
        elif i <= spec.a + spec.b:
            pairs = [(v1, c1), (v1, c2), (v2, c1), (v2, c2)]
        else:
            pairs = [(v1, c1), (v1, v2), (c1, c2), (v2, c2)]
        edges.extend((u, x, y) for x, y in pairs)
    return make_hypergraph(3, G.n + 2, edges)


def gi_labels(t: int) -> list[str]:
    """Conventional names of the vertices of ``construct_Gi(t, i)``, by index."""
    return ["1", "1'", "2", "2'"] + [str(j) for j in range(3, 3 * t + 4)]


def construct_Gi(t: int, i: int) -> Hypergraph:
    """``complete_minus(t)`` mix-crossed with ``a = 1, b = i`` on its first two vertices.

    Vertices are reordered to ``1, 1', 2, 2', 3, ..., 3t+3`` (see
    :func:`gi_labels`), so index 0 is the crossed vertex 1, index 1 its clone,
    and so on. Feasible exactly when ``i <= 3t - 1``; larger ``i`` raise
    :class:`CodegreeTooSmall`.
    """
    if t < 1 or i < 1:
        raise InvalidParameter(f"need t >= 1 and i >= 1, got t={t}, i={i}")
    K = complete_minus(t)
    raw = mix_crossed_blowup(K, MixCrossSpec.canonical(K, 0, 1, 1, i))
    m = K.n
    # raw order: 1, 2, 3..3t+3, 1', 2'  ->  1, 1', 2, 2', 3..3t+3
    image = [0, 2] + [j + 2 for j in range(2, m)] + [1, 3]
    return make_hypergraph(3, raw.n, [[image[v] for v in e] for e in raw.edges])


def codegree_table(G: Hypergraph) -> dict[tuple[int, int], int]:
    """Codegree of every unordered pair ``u < v``, zeros included."""
    return {(u, v): codegree(G, u, v) for u, v in itertools.combinations(range(G.n), 2)}


def expected_codegrees_G1(t: int) -> dict[tuple[int, int], int]:
    """Codegrees of ``G_1`` predicted case by case, in ``construct_Gi`` indexing."""
    v1, c1, v2, c2 = 0, 1, 2, 3
    rest = list(range(4, 3 * t + 5))
    light = set(rest[-3:])
    exp: dict[tuple[int, int], int] = {}

    def put(x, y, val):
        exp[(min(x, y), max(x, y))] = val

    for x, y in [(v1, c2), (c1, v2)]:
        put(x, y, 2)
    for x in (v1, c2):
        for y in (c1, v2):
            put(x, y, 3 * t)
    for x in (v1, c1, v2, c2):
        for y in rest:
            put(x, y, 3 * t + 2)
    for x, y in itertools.combinations(rest, 2):
        put(x, y, 3 * t + 2 if x in light and y in light else 3 * t + 3)
    return exp


def verify_codegree_table(t: int) -> bool:
    """Check every pair of ``G_1`` against :func:`expected_codegrees_G1`."""
    G = construct_Gi(t, 1)
    expected = expected_codegrees_G1(t)
    actual = codegree_table(G)
    return expected.keys() == actual.keys() and expected == actual


@dataclass(frozen=True)
class EquivalencePartition:
    blocks: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.blocks)

    def block_of(self) -> list[int]:
        out = [0] * sum(len(b) for b in self.blocks)
        for k, b in enumerate(self.blocks):
            for v in b:
                out[v] = k
        return out


def equivalence_classes(H: Hypergraph) -> EquivalencePartition:
    """Group vertices with identical links.

    Equal links already force non-adjacency: an edge through both u and v
    would put a set containing v into L(u) but never into L(v).
    """
    groups: dict[frozenset, list[int]] = {}
    for v in range(H.n):
        groups.setdefault(link_sets(H, v), []).append(v)
    blocks = sorted(tuple(g) for g in groups.values())
    return EquivalencePartition(tuple(blocks))


def quotient(H: Hypergraph) -> tuple[Hypergraph, tuple[int, ...]]:
    """Induced subgraph on one representative per class, plus the vertex -> class map."""
    part = equivalence_classes(H)
    T, _ = induced(H, part.representatives)
    return T, tuple(part.block_of())


def is_blowup_reconstruction(H: Hypergraph, T: Hypergraph, vmap: Sequence[int]) -> bool:
    """True iff ``H`` is exactly the blowup of ``T`` with parts ``vmap^{-1}(j)``."""
    if len(vmap) != H.n or H.r != T.r:
        return False
    for e in H.edges:
        img = {vmap[v] for v in e}
        if len(img) != H.r or tuple(sorted(img)) not in T.edge_set:
            return False
    sizes = np.bincount(np.asarray(vmap, dtype=int), minlength=T.n) if H.n else np.zeros(T.n, int)
    expected = sum(int(np.prod([sizes[v] for v in e])) for e in T.edges)
    return expected == len(H)


def is_symmetrized(H: Hypergraph) -> bool:
    """Every pair of non-equivalent vertices lies in a common edge."""
    cls = equivalence_classes(H).block_of()
    covered = set()
    for e in H.edges:
        covered.update(itertools.combinations(e, 2))
    return all(
        cls[u] == cls[v] or (u, v) in covered
        for u, v in itertools.combinations(range(H.n), 2)
    )


def _check_bijection(H1: Hypergraph, H2: Hypergraph, sigma: Sequence[int]) -> None:
    if H1.n != H2.n or H1.r != H2.r:
        raise DimensionMismatch("edit distance needs equal vertex counts and uniformity")
    if len(sigma) != H2.n or sorted(sigma) != list(range(H1.n)):
        raise InvalidParameter("sigma must be a bijection V(H2) -> V(H1)")


def edit_distance_under(H1: Hypergraph, H2: Hypergraph, sigma: Sequence[int]) -> int:
    """``|H1 symmetric-difference sigma(H2)|`` for a bijection ``sigma: V(H2) -> V(H1)``."""
    _check_bijection(H1, H2, sigma)
    mapped = {tuple(sorted(sigma[v] for v in e)) for e in H2.edges}
    return len(H1.edge_set ^ mapped)


def _signature_alignment(H1: Hypergraph, H2: Hypergraph) -> list[int]:
    def sig(H):
        pairs: dict[int, list[int]] = {v: [] for v in range(H.n)}
        cnt: dict[tuple[int, int], int] = {}
        for e in H.edges:
            for p in itertools.combinations(e, 2):
                cnt[p] = cnt.get(p, 0) + 1
        for (u, v), c in cnt.items():
            pairs[u].append(c)
            pairs[v].append(c)
        return [(len(H.incidence[v]), tuple(sorted(pairs[v]))) for v in range(H.n)]

    s1, s2 = sig(H1), sig(H2)
    o1 = sorted(range(H1.n), key=lambda v: (s1[v], v))
    o2 = sorted(range(H2.n), key=lambda v: (s2[v], v))
    sigma = [0] * H2.n
    for a, b in zip(o2, o1):
        sigma[a] = b
    return sigma


def _local_search(H1: Hypergraph, H2: Hypergraph, sigma: list[int], max_passes: int) -> tuple[list[int], int]:
    target = H1.edge_set
    inc2 = H2.incidence

    def overlap_of(edges, s):
        return sum(tuple(sorted(s[v] for v in e)) in target for e in edges)

    overlap = overlap_of(H2.edges, sigma)
    full = len(H1) + len(H2)
    for _ in range(max_passes):
        improved = False
        for x, y in itertools.combinations(range(H2.n), 2):
            touched = set(inc2[x]) | set(inc2[y])
            if not touched:
                continue
            before = overlap_of(touched, sigma)
            sigma[x], sigma[y] = sigma[y], sigma[x]
            after = overlap_of(touched, sigma)
            if after > before:
                overlap += after - before
                improved = True
            else:
                sigma[x], sigma[y] = sigma[y], sigma[x]
        if not improved or overlap == len(H2) == len(H1):
            break
    return sigma, full - 2 * overlap


def heuristic_min_edit(
    H1: Hypergraph,
    H2: Hypergraph,
    iters: int = 50,
    seed: int = 0,
    restarts: int = 8,
    return_bijection: bool = False,
):
    """Smallest edit distance found by transposition local search.

    This is an upper bound on the minimum over bijections, not a certificate.
    Restart 0 aligns vertices by (degree, codegree profile); the others start
    from permutations drawn from ``default_rng([seed, index])``.
    """
    if H1.n != H2.n or H1.r != H2.r:
        raise DimensionMismatch("edit distance needs equal vertex counts and uniformity")
    best_d, best_s = None, None
    for k in range(restarts):
        if k == 0:
            start = _signature_alignment(H1, H2)
        else:
            start = [int(v) for v in np.random.default_rng([seed, k]).permutation(H1.n)]
        sigma, d = _local_search(H1, H2, start, iters)
        if best_d is None or d < best_d:
            best_d, best_s = d, list(sigma)
        if best_d == 0:
            break
    return (best_d, best_s) if return_bijection else best_d
