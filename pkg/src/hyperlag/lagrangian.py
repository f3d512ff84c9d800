"""Lagrangian polynomial of a hypergraph and its maximum over the simplex.

The optimizer is multi-restart projected gradient ascent with an Armijo
backtracking line search. Restarts run as one batch (one row per restart)
so every restart sees exactly the same arithmetic regardless of how many
others there are; a short Newton refinement on the support face finishes
each restart so the projected-gradient tolerance is reachable in float64.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, sqrt

import numpy as np
from scipy import sparse

from .core import Hypergraph
from .errors import DimensionMismatch, GridTooLarge, InvalidParameter

DEFAULT_RESTARTS = 64
DEFAULT_MAX_ITERS = 100_000
DEFAULT_TOL = 1e-12
GRID_LIMIT = 10**8

_ARMIJO_C = 1e-4
_MAX_HALVINGS = 60


@dataclass(frozen=True)
class LagrangianReport:
    value: float
    argmax: np.ndarray = field(repr=False)
    restarts_used: int
    converged: bool
    kkt_residual: float

    def to_dict(self) -> dict:
        return {
            "value": float(self.value),
            "argmax": [float(x) for x in self.argmax],
            "restarts_used": int(self.restarts_used),
            "converged": bool(self.converged),
            "kkt_residual": float(self.kkt_residual),
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, LagrangianReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None


def vertex_weighting(w, n: int | None = None) -> np.ndarray:
    """Validate a nonnegative weight vector and rescale it onto the simplex."""
    x = np.asarray(w, dtype=float).reshape(-1)
    if n is not None and x.size != n:
        raise DimensionMismatch(f"weighting has length {x.size}, expected {n}")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise InvalidParameter("weights must be finite and nonnegative")
    total = x.sum()
    if total <= 0:
        raise InvalidParameter("weights must not all be zero")
    return x / total


@lru_cache(maxsize=512)
def _edge_array(H: Hypergraph) -> np.ndarray:
    if not H.edges:
        return np.zeros((0, H.r), dtype=np.intp)
    return np.asarray(H.edges, dtype=np.intp)


@lru_cache(maxsize=512)
def _position_incidence(H: Hypergraph) -> list[sparse.csr_matrix]:
    """One (n, m) 0/1 matrix per edge position, scattering edge values to that vertex."""
    E = _edge_array(H)
    m = E.shape[0]
    cols = np.arange(m)
    return [
        sparse.csr_matrix((np.ones(m), (E[:, j], cols)), shape=(H.n, m))
        for j in range(H.r)
    ]


def _as_batch(H: Hypergraph, w) -> tuple[np.ndarray, bool]:
    W = np.asarray(w, dtype=float)
    single = W.ndim == 1
    W = np.atleast_2d(W)
    if W.shape[-1] != H.n:
        raise DimensionMismatch(f"weighting has length {W.shape[-1]}, graph has {H.n} vertices")
    return W, single


def poly_eval(H: Hypergraph, w) -> float | np.ndarray:
    """Sum over edges of the product of the edge's weights.

    ``w`` may be a single vector or a 2-D batch with one weighting per row.
    """
    W, single = _as_batch(H, w)
    E = _edge_array(H)
    if E.shape[0] == 0:
        out = np.zeros(W.shape[0])
    else:
        out = np.prod(W[:, E], axis=2).sum(axis=1)
    return float(out[0]) if single else out


def poly_grad(H: Hypergraph, w) -> np.ndarray:
    """Partial derivatives of the Lagrangian polynomial (batched like ``poly_eval``)."""
    W, single = _as_batch(H, w)
    E = _edge_array(H)
    G = np.zeros_like(W)
    if E.shape[0]:
        cols = W[:, E]  # (R, m, r)
        for j, S in enumerate(_position_incidence(H)):
            keep = [k for k in range(H.r) if k != j]
            others = np.prod(cols[:, :, keep], axis=2)  # (R, m)
            G += (S @ others.T).T
    return G[0] if single else G


def poly_hessian(H: Hypergraph, w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    E = _edge_array(H)
    Hm = np.zeros((H.n, H.n))
    if E.shape[0] == 0:
        return Hm
    cols = w[E]
    for i, j in itertools.permutations(range(H.r), 2):
        others = np.prod(np.delete(cols, [i, j], axis=1), axis=1)
        np.add.at(Hm, (E[:, i], E[:, j]), others)
    return Hm


def project_simplex(Y: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of ``Y`` onto the probability simplex."""
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    n = Y.shape[1]
    U = -np.sort(-Y, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    idx = np.arange(1, n + 1)
    cond = U - css / idx > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(Y.shape[0]), rho] / (rho + 1)
    X = np.maximum(Y - theta[:, None], 0.0)
    return X / X.sum(axis=1, keepdims=True)


def _centered(W: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Shift each gradient row by its mean over the support of ``W``.

    Projection onto the simplex ignores constant shifts; centering keeps
    ``W + s * G`` close to the simplex for large steps, avoiding cancellation.
    """
    supp = W > 0
    mu = (G * supp).sum(axis=1) / np.maximum(supp.sum(axis=1), 1)
    return G - mu[:, None]


def projected_gradient_norm(H: Hypergraph, w) -> float | np.ndarray:
    """``|P(w + grad) - w|``, zero exactly at first-order stationary points."""
    W, single = _as_batch(H, w)
    G = _centered(W, poly_grad(H, W))
    out = np.linalg.norm(project_simplex(W + G) - W, axis=1)
    return float(out[0]) if single else out


def kkt_check(H: Hypergraph, w, tol: float = 1e-12) -> float:
    """First-order optimality residual of a simplex point.

    Coordinates above ``tol`` form the support. The residual is the spread of
    partial derivatives around their support mean plus the largest excess of
    an off-support partial over that mean.
    """
    w = np.asarray(w, dtype=float)
    g = poly_grad(H, w)
    supp = w > tol
    if not supp.any():
        return 0.0
    mu = g[supp].mean()
    on = float(np.max(np.abs(g[supp] - mu)))
    off = float(np.max(np.maximum(g[~supp] - mu, 0.0))) if (~supp).any() else 0.0
    return on + off


def closed_form_lambda(t: int) -> float:
    """Lagrangian of the complete 3-graph on 3t+3 vertices minus one edge."""
    if t < 1:
        raise InvalidParameter(f"t must be >= 1, got {t}")
    s = 3 * t
    q = s * s + 6 * s - 3
    return (27 * s - 9 * s**2 - 9 * s**3 - s**4 + s * q * sqrt(q)) / 324


def optimal_weights(t: int) -> tuple[float, float]:
    """The two weight levels ``(a, b)`` of the optimum, with ``3t*a + 3b = 1``."""
    if t < 1:
        raise InvalidParameter(f"t must be >= 1, got {t}")
    a = 2.0 / (3 * t + 3 + sqrt(9 * t * t + 18 * t - 3))
    return a, 1.0 / 3.0 - t * a


def optimal_point(t: int, layout: str = "base") -> np.ndarray:
    """Optimum of ``complete_minus(t)`` (``base``) or of ``G_i`` (``mixed``).

    ``mixed`` follows the vertex order of :func:`hyperlag.construct.construct_Gi`:
    four half-weights for the crossed pair and its clones, then ``3t-2`` full
    weights, then the three light vertices.
    """
    a, b = optimal_weights(t)
    if layout == "base":
        return np.array([a] * (3 * t) + [b] * 3)
    if layout == "mixed":
        return np.array([a / 2] * 4 + [a] * (3 * t - 2) + [b] * 3)
    raise InvalidParameter(f"unknown layout {layout!r}")


def _restart_points(H: Hypergraph, restarts: int, seed: int, seed_candidates: bool) -> np.ndarray:
    n = H.n
    pts = [np.full(n, 1.0 / n)]
    if seed_candidates and H.r == 3:
        if n >= 6 and (n - 3) % 3 == 0:
            pts.append(optimal_point((n - 3) // 3, "base"))
        if n >= 8 and (n - 5) % 3 == 0:
            pts.append(optimal_point((n - 5) // 3, "mixed"))
    pts = pts[:restarts]
    for i in range(len(pts), restarts):
        rng = np.random.default_rng([seed, i])
        pts.append(rng.dirichlet(np.ones(n)))
    return np.array(pts)


def _ascend(H: Hypergraph, W: np.ndarray, max_iters: int, tol: float) -> np.ndarray:
    """Batched projected gradient ascent; returns the final iterates."""
    W = project_simplex(W)
    F = poly_eval(H, W)
    G = _centered(W, poly_grad(H, W))
    step = np.ones(W.shape[0])
    live = np.ones(W.shape[0], dtype=bool)
    for _ in range(max_iters):
        gm = np.linalg.norm(project_simplex(W + G) - W, axis=1)
        live &= gm >= tol
        idx = np.flatnonzero(live)
        if idx.size == 0:
            break
        s = step[idx].copy()
        pending = np.ones(idx.size, dtype=bool)
        Ynew = W[idx].copy()
        Fnew = F[idx].copy()
        for _ in range(_MAX_HALVINGS):
            p = np.flatnonzero(pending)
            if p.size == 0:
                break
            rows = idx[p]
            Y = project_simplex(W[rows] + s[p, None] * G[rows])
            FY = poly_eval(H, Y)
            gain = np.einsum("ij,ij->i", G[rows], Y - W[rows])
            slack = 8 * np.finfo(float).eps * np.maximum(np.abs(F[rows]), 1e-300)
            ok = FY >= F[rows] + _ARMIJO_C * gain - slack
            acc = p[ok]
            Ynew[acc] = Y[ok]
            Fnew[acc] = FY[ok]
            pending[acc] = False
            s[p[~ok]] *= 0.5
        # rows whose line search never succeeded are stuck at float resolution
        live[idx[pending]] = False
        moved = idx[~pending]
        if moved.size == 0:
            continue
        Gnew = _centered(Ynew[~pending], poly_grad(H, Ynew[~pending]))
        dw = Ynew[~pending] - W[moved]
        dg = Gnew - G[moved]
        num = np.einsum("ij,ij->i", dw, dw)
        den = -np.einsum("ij,ij->i", dw, dg)
        bb = np.where(den > 0, num / np.where(den > 0, den, 1.0), 1e6)
        step[moved] = np.clip(bb, 1e-6, 1e6)
        W[moved] = Ynew[~pending]
        F[moved] = Fnew[~pending]
        G[moved] = Gnew
    return W


def _newton_polish(H: Hypergraph, w: np.ndarray, iters: int = 25) -> np.ndarray:
    """Refine a near-stationary point with Newton steps on its support face."""
    best = w
    best_gm = projected_gradient_norm(H, w)
    if best_gm == 0.0:
        return w
    best_val = poly_eval(H, w)
    supp = np.flatnonzero(w > 1e-9)
    if supp.size < 2:
        return w
    x = w.copy()
    x[np.setdiff1d(np.arange(H.n), supp)] = 0.0
    x /= x.sum()
    k = supp.size
    for _ in range(iters):
        g = poly_grad(H, x)[supp]
        hess = poly_hessian(H, x)[np.ix_(supp, supp)]
        mu = g.mean()
        J = np.zeros((k + 1, k + 1))
        J[:k, :k] = hess
        J[:k, k] = -1.0
        J[k, :k] = 1.0
        rhs = -np.concatenate([g - mu, [x[supp].sum() - 1.0]])
        delta = np.linalg.lstsq(J, rhs, rcond=None)[0]
        xs = x[supp] + delta[:k]
        if np.any(xs < 0):
            break
        x = x.copy()
        x[supp] = xs
        x /= x.sum()
        gm = projected_gradient_norm(H, x)
        val = poly_eval(H, x)
        if gm < best_gm and val >= best_val - 8 * np.finfo(float).eps * max(best_val, 1e-300):
            best, best_gm, best_val = x, gm, max(val, best_val)
        if gm == 0.0:
            break
    return best


def lagrangian(
    H: Hypergraph,
    restarts: int = DEFAULT_RESTARTS,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
    seed: int = 0,
    seed_candidates: bool = True,
) -> LagrangianReport:
    """Numerically maximize the Lagrangian polynomial over the simplex.

    Restart 0 is the uniform point. When ``seed_candidates`` is set and the
    vertex count matches, the known optima of ``complete_minus(t)`` and
    ``G_i`` come next; remaining restarts are Dirichlet(1) samples drawn
    from ``default_rng([seed, index])``. The first restart reaching the best
    value wins.
    """
    if restarts < 1:
        raise InvalidParameter("restarts must be >= 1")
    n = H.n
    if n == 0:
        return LagrangianReport(0.0, np.zeros(0), 0, True, 0.0)
    if n < H.r or not H.edges:
        w = np.full(n, 1.0 / n)
        return LagrangianReport(0.0, w, 0, True, kkt_check(H, w))

    W = _ascend(H, _restart_points(H, restarts, seed, seed_candidates), max_iters, tol)
    best_i, best_w, best_v = -1, None, -np.inf
    gms = projected_gradient_norm(H, W)
    for i in range(W.shape[0]):
        w = W[i] if gms[i] < tol else _newton_polish(H, W[i])
        v = poly_eval(H, w)
        if v > best_v:
            best_i, best_w, best_v = i, w, v
    gm = projected_gradient_norm(H, best_w)
    return LagrangianReport(
        value=float(best_v),
        argmax=best_w,
        restarts_used=W.shape[0],
        converged=bool(gm < tol),
        kkt_residual=kkt_check(H, best_w),
    )


@lru_cache(maxsize=None)
def _compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    blocks = [
        np.column_stack([np.full(len(rest), first, dtype=np.int64), rest])
        for first in range(total + 1)
        for rest in [_compositions(total - first, parts - 1)]
    ]
    return np.vstack(blocks)


def _prefixes(budget: int, length: int):
    if length == 0:
        yield ()
        return
    for first in range(budget + 1):
        for rest in _prefixes(budget - first, length - 1):
            yield (first, *rest)


def lagrangian_grid_oracle(H: Hypergraph, resolution: int) -> float:
    """Exact maximum of the Lagrangian polynomial over the grid ``(1/resolution) Z^n``.

    Works in integer arithmetic on the numerators, so the result is the
    exact grid maximum divided once by ``resolution ** r``. It is a lower
    bound on the Lagrangian.
    """
    if resolution < 1:
        raise InvalidParameter("resolution must be >= 1")
    n = H.n
    if n == 0 or not H.edges:
        return 0.0
    points = comb(resolution + n - 1, n - 1)
    if points > GRID_LIMIT:
        raise GridTooLarge(f"{points} grid points exceed the limit of {GRID_LIMIT}")
    E = _edge_array(H)
    q = min(n, 4)
    best = 0
    for prefix in _prefixes(resolution, n - q):
        tail = _compositions(resolution - sum(prefix), q)
        X = np.empty((tail.shape[0], n), dtype=np.int64)
        X[:, : n - q] = prefix
        X[:, n - q :] = tail
        vals = np.prod(X[:, E], axis=2).sum(axis=1)
        best = max(best, int(vals.max()))
    return best / resolution**H.r


def blowup_bound_check(H: Hypergraph, blown: Hypergraph, lam: float | None = None) -> bool:
    """Whether ``|blown| <= lambda(H) * v(blown)^r`` up to ``1e-6 * v^r`` slack."""
    if lam is None:
        lam = lagrangian(H).value
    nr = blown.n**H.r
    return len(blown) <= lam * nr + 1e-6 * nr
