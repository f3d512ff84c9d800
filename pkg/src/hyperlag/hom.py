"""Homomorphism and containment search between hypergraphs.

A homomorphism may identify vertices but never collapses an edge: the image
of every edge must be an edge of the target, hence a set of r distinct
vertices. Injective homomorphisms are copies (subgraph containment).

The search assigns F-vertices in descending-degree order and tries target
vertices in increasing index order, keeping a bitmask domain for every
unassigned vertex. Copies additionally need degrees and pair codegrees to
be no smaller at the image. Two cheap global bounds run first: the pigeonhole bound
``v(F) > v(G)`` for injective maps, and a clique bound (a clique in the
shadow of F must land injectively on a clique in the shadow of G, whose size
is at most the number of colours a greedy colouring needs).
"""

from __future__ import annotations

import itertools
from math import comb
from typing import Sequence

import networkx as nx

from .construct import construct_Gi
from .core import Hypergraph, covered_pairs, is_2_covered
from .errors import NotTwoCovered, SearchBudgetExceeded, UniformityMismatch

DEFAULT_BUDGET = 10**8

VertexMap = tuple[int, ...]


def _shadow_masks(H: Hypergraph) -> list[int]:
    adj = [0] * H.n
    for u, v in covered_pairs(H):
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return adj


def _completion_masks(G: Hypergraph) -> dict[tuple[int, ...], int]:
    """``{sorted (r-1)-set S: bitmask of w with S + w in G}``."""
    out: dict[tuple[int, ...], int] = {}
    for e in G.edges:
        for k, w in enumerate(e):
            key = e[:k] + e[k + 1:]
            out[key] = out.get(key, 0) | (1 << w)
    return out


def _codegree_masks(H: Hypergraph) -> tuple[list[list[int]], list[list[int]]]:
    """Pair codegrees, and for each vertex ``g`` and ``c`` the mask of ``h`` with codegree >= c."""
    cod = [[0] * H.n for _ in range(H.n)]
    for e in H.edges:
        for u, v in itertools.combinations(e, 2):
            cod[u][v] += 1
            cod[v][u] += 1
    top = max((max(row) for row in cod), default=0)
    masks = []
    for g in range(H.n):
        row = [0] * (top + 2)
        for h in range(H.n):
            for c in range(cod[g][h] + 1):
                row[c] |= 1 << h
        masks.append(row)
    return cod, masks


def greedy_clique(adj: list[int]) -> int:
    """Size of a clique found greedily by descending degree (a lower bound)."""
    order = sorted(range(len(adj)), key=lambda v: (-bin(adj[v]).count("1"), v))
    best = 0
    for start in order:
        cand = adj[start]
        size = 1
        for v in order:
            if cand >> v & 1:
                size += 1
                cand &= adj[v]
        best = max(best, size)
    return best


def _colour_bound(H: Hypergraph) -> int:
    """Colours used by a DSATUR colouring of the shadow (an upper bound on its clique number)."""
    if H.n == 0:
        return 0
    g = nx.Graph()
    g.add_nodes_from(range(H.n))
    g.add_edges_from(covered_pairs(H))
    return 1 + max(nx.greedy_color(g, strategy="DSATUR").values())


def verify_homomorphism(F: Hypergraph, G: Hypergraph, phi: Sequence[int], injective: bool = False) -> bool:
    """Independent check that ``phi`` maps every edge of F onto an edge of G."""
    if len(phi) != F.n or any(not 0 <= x < G.n for x in phi):
        return False
    if injective and len(set(phi)) != len(phi):
        return False
    return all(tuple(sorted(phi[v] for v in e)) in G.edge_set for e in F.edges)


def find_homomorphism(
    F: Hypergraph,
    G: Hypergraph,
    injective: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> VertexMap | None:
    """A homomorphism ``F -> G`` as a tuple of images, or ``None`` if there is none.

    Raises :class:`SearchBudgetExceeded` after ``budget`` assignments rather
    than guessing.
    """
    if F.r != G.r:
        raise UniformityMismatch(f"uniformities differ: {F.r} vs {G.r}")
    if F.n == 0:
        return ()
    if G.n == 0 or (injective and (F.n > G.n or len(F) > len(G))):
        return None
    if F.edges and not G.edges:
        return None
    fadj = _shadow_masks(F)
    if F.edges and greedy_clique(fadj) > _colour_bound(G):
        return None

    gadj = _shadow_masks(G)
    completion = _completion_masks(G)
    full = (1 << G.n) - 1
    nonisolated = 0
    for v in range(G.n):
        if G.incidence[v]:
            nonisolated |= 1 << v
    order = sorted(range(F.n), key=lambda v: (-len(F.incidence[v]), v))
    dom = [nonisolated if F.incidence[v] else full for v in range(F.n)]
    if injective:
        # a copy sends distinct edges at x to distinct edges at its image
        for v in range(F.n):
            for g in range(G.n):
                if len(G.incidence[g]) < len(F.incidence[v]):
                    dom[v] &= ~(1 << g)
        fcod, _ = _codegree_masks(F)
        _, gcod_masks = _codegree_masks(G)
        top = len(gcod_masks[0]) - 1 if G.n else 0
    phi = [-1] * F.n
    nodes = 0

    def assign(x: int, g: int, dom: list[int]) -> list[int] | None:
        new = dom[:]
        new[x] = 1 << g
        for y in range(F.n):
            if phi[y] < 0 and y != x:
                if fadj[x] >> y & 1:
                    new[y] &= gadj[g]
                if injective:
                    new[y] &= ~(1 << g)
                    c = fcod[x][y]
                    if c:
                        new[y] &= gcod_masks[g][c] if c <= top else 0
        for e in F.incidence[x]:
            free = [v for v in e if phi[v] < 0 and v != x]
            if len(free) == 1:
                y = free[0]
                key = tuple(sorted(g if v == x else phi[v] for v in e if v != y))
                new[y] &= completion.get(key, 0)
        for y in range(F.n):
            if phi[y] < 0 and y != x and new[y] == 0:
                return None
        return new

    def search(depth: int, dom: list[int]) -> bool:
        nonlocal nodes
        if depth == F.n:
            return True
        x = order[depth]
        mask = dom[x]
        while mask:
            low = mask & -mask
            g = low.bit_length() - 1
            mask ^= low
            nodes += 1
            if nodes > budget:
                raise SearchBudgetExceeded(nodes)
            new = assign(x, g, dom)
            if new is None:
                continue
            phi[x] = g
            if search(depth + 1, new):
                return True
            phi[x] = -1
        return False

    if not search(0, dom):
        return None
    result = tuple(phi)
    if not verify_homomorphism(F, G, result, injective):
        raise RuntimeError("search produced an invalid witness")
    return result


def is_colorable(F: Hypergraph, G: Hypergraph, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether some homomorphism ``F -> G`` exists (F lies in a blowup of G)."""
    return find_homomorphism(F, G, injective=False, budget=budget) is not None


def is_F_free(H: Hypergraph, F: Hypergraph, budget: int = DEFAULT_BUDGET) -> bool:
    """Whether ``H`` contains no copy of ``F``."""
    return find_homomorphism(F, H, injective=True, budget=budget) is None


def hom_free_equivalence_check(
    H: Hypergraph, family: Sequence[Hypergraph], budget: int = DEFAULT_BUDGET
) -> bool:
    """Compare family-freeness with family-hom-freeness of ``H``.

    For a 2-covered family the two always agree, so this returns ``True``
    unless the search code is wrong.
    """
    for F in family:
        if not is_2_covered(F):
            raise NotTwoCovered(f"family member {F!r} is not 2-covered")
    free = all(is_F_free(H, F, budget) for F in family)
    hom_free = all(not is_colorable(F, H, budget) for F in family)
    return free == hom_free


def find_clique(adj: list[int], size: int) -> tuple[int, ...] | None:
    """Lexicographically first clique of the given size in a bitmask graph."""
    n = len(adj)
    if size == 0:
        return ()

    def extend(chosen: list[int], cand: int) -> tuple[int, ...] | None:
        if len(chosen) == size:
            return tuple(chosen)
        if bin(cand).count("1") < size - len(chosen):
            return None
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            found = extend(chosen + [v], cand & adj[v])
            if found is not None:
                return found
        return None

    return extend([], (1 << n) - 1)


def in_K_ell_family(F: Hypergraph, ell: int) -> tuple[int, ...] | None:
    """An ``ell``-set whose pairs are all covered by edges of ``F``, if ``|F| <= C(ell, 2)``."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if len(F) > comb(ell, 2) or F.n < ell:
        return None
    return find_clique(_shadow_masks(F), ell)


def mt_member(
    F: Hypergraph,
    t: int,
    fixtures: Sequence[Hypergraph] | None = None,
    budget: int = DEFAULT_BUDGET,
) -> bool:
    """Membership of ``F`` in the forbidden family for parameter ``t``.

    ``F`` belongs when it has at most ``(3t+6)^2`` vertices and admits no
    homomorphism into any ``G_i`` (equivalently, every blowup of every
    ``G_i`` is F-free).
    """
    if F.n > (3 * t + 6) ** 2:
        return False
    if fixtures is None:
        fixtures = [construct_Gi(t, i) for i in range(1, t + 1)]
    return all(not is_colorable(F, G, budget) for G in fixtures)

