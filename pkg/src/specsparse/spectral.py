"""Quadratic forms, normalized-Laplacian spectra and spectral approximation.

The approximation factor of a pair of graphs is measured exactly from the
generalized eigenvalues of their Laplacian pencil.  Both Laplacians are
grounded at one vertex per connected component, which removes the common
nullspace without changing any Rayleigh quotient.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import DegreeContext, GraphError, WeightedGraph, build_graph, component_labels

DENSE_THRESHOLD = 2000


@dataclass(frozen=True)
class ApproximationReport:
    sigma: float
    pencil_min: float
    pencil_max: float
    rel_norm: float
    method: str = "exact-dense"

    @property
    def finite(self) -> bool:
        return math.isfinite(self.sigma)


@dataclass(frozen=True)
class SpectralEstimate:
    lambda2: float
    residual: float
    disconnected: bool = False
    method: str = "exact-dense"


def quadratic_form(G: WeightedGraph, x: Sequence[float]) -> float:
    """sum over edges of w * (x_u - x_v)^2, accumulated in canonical edge order."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (G.n,):
        raise GraphError(f"vector has length {x.size}, graph has {G.n} vertices")
    d = x[G.u] - x[G.v]
    return float(np.dot(G.w, d * d))


def _degrees(G: WeightedGraph, ctx: DegreeContext | None) -> np.ndarray:
    if ctx is None:
        return G.weighted_degree
    if ctx.n != G.n:
        raise GraphError("degree context length differs from graph size")
    return np.asarray(ctx.degrees, dtype=np.float64)


def normalized_laplacian(G: WeightedGraph, d: np.ndarray, idx: np.ndarray) -> np.ndarray:
    """Dense D^{-1/2} L D^{-1/2} restricted to the vertices ``idx`` (all with d > 0)."""
    L = G.laplacian()[idx][:, idx].toarray()
    s = 1.0 / np.sqrt(d[idx])
    return L * s[:, None] * s[None, :]


def normalized_lambda2(G: WeightedGraph, ctx: DegreeContext | None = None, dense_threshold: int = DENSE_THRESHOLD) -> SpectralEstimate:
    """Smallest nonzero eigenvalue of the normalized Laplacian of G.

    Isolated vertices are ignored.  If the remaining graph is disconnected the
    answer is 0 and ``disconnected`` is set.
    """
    d = _degrees(G, ctx)
    idx = np.flatnonzero(G.unweighted_degree > 0)
    if idx.size < 2:
        return SpectralEstimate(0.0, 0.0, disconnected=False)
    if np.any(d[idx] <= 0):
        raise GraphError("degree context must be positive on non-isolated vertices")
    labels = component_labels(G.n, G.u, G.v)[idx]
    if np.unique(labels).size > 1:
        return SpectralEstimate(0.0, 0.0, disconnected=True)
    if idx.size <= dense_threshold:
        N = normalized_laplacian(G, d, idx)
        vals, vecs = np.linalg.eigh(N)
        lam, y = float(vals[1]), vecs[:, 1]
        res = float(np.linalg.norm(N @ y - lam * y))
        return SpectralEstimate(min(max(lam, 0.0), 2.0), res)
    return _lambda2_power(G, d, idx)


def _lambda2_power(G: WeightedGraph, d: np.ndarray, idx: np.ndarray, tol: float = 1e-6, seed: int = 0) -> SpectralEstimate:
    # power iteration on 2I - N with the known null vector D^{1/2} 1 deflated
    s = 1.0 / np.sqrt(d[idx])
    L = G.laplacian()[idx][:, idx]
    N = sp.diags(s) @ L @ sp.diags(s)
    null = np.sqrt(d[idx])
    null /= np.linalg.norm(null)
    y = np.random.default_rng(seed).standard_normal(idx.size)
    lam, res = 0.0, np.inf
    for _ in range(10 * idx.size):
        y -= null * (null @ y)
        y /= np.linalg.norm(y)
        Ny = N @ y
        lam = float(y @ Ny)
        res = float(np.linalg.norm(Ny - lam * y))
        if res < tol:
            break
        y = 2.0 * y - Ny
    return SpectralEstimate(min(max(lam, 0.0), 2.0), res, method="iterative-estimate")


def _same_components(G: WeightedGraph, H: WeightedGraph) -> tuple[bool, np.ndarray]:
    a = component_labels(G.n, G.u, G.v)
    b = component_labels(H.n, H.u, H.v)
    return bool(np.array_equal(a, b)), a


def pencil_extremes(G: WeightedGraph, H: WeightedGraph) -> tuple[float, float]:
    """Extreme generalized eigenvalues of (L_G, L_H) off the common nullspace.

    Returns ``(inf, 0)`` style values when the component structures differ.
    """
    if G.n != H.n:
        raise GraphError("graphs must have the same number of vertices")
    same, labels = _same_components(G, H)
    if not same:
        return 0.0, math.inf
    LG = G.laplacian().tocsc()
    LH = H.laplacian().tocsc()
    lo, hi = math.inf, -math.inf
    for root in np.unique(labels):
        comp = np.flatnonzero(labels == root)
        if comp.size < 2:
            continue
        keep = comp[1:]  # ground at the smallest vertex of the component
        A = LG[keep][:, keep].toarray()
        B = LH[keep][:, keep].toarray()
        vals = la.eigh(A, B, eigvals_only=True)
        lo, hi = min(lo, float(vals[0])), max(hi, float(vals[-1]))
    if hi == -math.inf:
        return 1.0, 1.0
    return lo, hi


def sigma_approximation(G: WeightedGraph, H: WeightedGraph, dense_threshold: int = DENSE_THRESHOLD) -> ApproximationReport:
    """Smallest sigma with (1/sigma) L_H <= L_G <= sigma L_H."""
    if G.n != H.n:
        raise GraphError("graphs must have the same number of vertices")
    if G.n > dense_threshold:
        raise GraphError(f"exact sigma is limited to {dense_threshold} vertices")
    lo, hi = pencil_extremes(G, H)
    if hi == math.inf or lo <= 0:
        return ApproximationReport(math.inf, lo, hi, math.inf)
    sigma = max(hi, 1.0 / lo, 1.0)
    return ApproximationReport(sigma, lo, hi, relative_norm(G, H))


def relative_norm(G: WeightedGraph, H: WeightedGraph, ctx: DegreeContext | None = None, dense_threshold: int = DENSE_THRESHOLD) -> float:
    """Spectral norm of D^{-1/2} (L_G - L_H) D^{-1/2}, D from ctx (default: weighted degrees of G)."""
    if G.n != H.n:
        raise GraphError("graphs must have the same number of vertices")
    d = _degrees(G, ctx)
    Delta = (G.laplacian() - H.laplacian()).tocsr()
    Delta.eliminate_zeros()
    active = np.flatnonzero(np.diff(Delta.indptr) > 0)
    if active.size == 0:
        return 0.0
    if np.any(d[active] <= 0):
        return math.inf
    s = 1.0 / np.sqrt(d[active])
    M = sp.diags(s) @ Delta[active][:, active] @ sp.diags(s)
    if active.size <= dense_threshold:
        vals = np.linalg.eigvalsh(M.toarray())
        return float(max(abs(vals[0]), abs(vals[-1])))
    vals = spla.eigsh(M, k=1, which="LM", return_eigenvectors=False, v0=np.ones(active.size))
    return float(abs(vals[0]))


def loewner_leq(G: WeightedGraph, H: WeightedGraph, tol: float | None = None) -> bool:
    """True iff L_G <= L_H, i.e. lambda_min(L_H - L_G) >= -tol."""
    if G.n != H.n:
        raise GraphError("graphs must have the same number of vertices")
    if tol is None:
        scale = max(float(G.weighted_degree.max(initial=0.0)), float(H.weighted_degree.max(initial=0.0)), 1.0)
        tol = 1e-8 * scale
    if G.n == 0:
        return True
    M = H.dense_laplacian() - G.dense_laplacian()
    return bool(np.linalg.eigvalsh(M)[0] >= -tol)


def path_domination_check(edge: tuple[int, int, float], path_weights: Sequence[float], path_graph: WeightedGraph, factor_scale: float = 1.0) -> bool:
    """Check (u, v) <= (sum 1/w_i) F for a weight-1 edge and a u-v path F.

    ``factor_scale`` multiplies the factor; values below 1 probe tightness.
    """
    a, b = int(edge[0]), int(edge[1])
    if len(edge) > 2 and edge[2] != 1:
        raise GraphError("the edge must have weight 1")
    _check_path(a, b, path_weights, path_graph)
    factor = factor_scale * sum(1.0 / float(x) for x in path_weights)
    E = build_graph(path_graph.n, [(a, b, 1.0)])
    return loewner_leq(E, path_graph.scaled(factor))


def _check_path(a: int, b: int, weights: Sequence[float], F: WeightedGraph) -> None:
    if a == b or F.m != len(weights) or F.m == 0:
        raise GraphError("malformed path: edge count mismatch")
    deg = F.unweighted_degree
    touched = np.flatnonzero(deg > 0)
    ends = set(np.flatnonzero(deg == 1).tolist())
    if ends != {a, b} or np.any(deg > 2) or touched.size != F.m + 1:
        raise GraphError("malformed path: not a simple path between the edge endpoints")
    # walk from a, collecting weights in path order
    wmap = F.weight_map()
    order, prev, cur = [], -1, a
    while cur != b:
        nxt = [x for x in F.neighbors(cur).tolist() if x != prev]
        if len(nxt) != 1:
            raise GraphError("malformed path: branching or disconnected")
        key = (min(cur, nxt[0]), max(cur, nxt[0]))
        order.append(wmap[key])
        prev, cur = cur, nxt[0]
    if len(order) != F.m or not np.allclose(order, [float(x) for x in weights], rtol=0, atol=0):
        raise GraphError("malformed path: weights do not match the path")


@dataclass(frozen=True)
class Lemma1Check:
    lam: float
    eps_hat: float
    sigma: float
    bound: float
    holds: bool

    @property
    def applicable(self) -> bool:
        return self.eps_hat < self.lam


def lemma1_check(G: WeightedGraph, H: WeightedGraph, ctx: DegreeContext | None = None, tol: float = 1e-6) -> Lemma1Check:
    """Evaluate the norm-to-approximation bound sigma <= lam / (lam - eps_hat)."""
    lam = normalized_lambda2(G, ctx).lambda2
    eps_hat = relative_norm(G, H, ctx)
    sigma = sigma_approximation(G, H).sigma
    if eps_hat >= lam:
        return Lemma1Check(lam, eps_hat, sigma, math.inf, True)
    bound = lam / (lam - eps_hat)
    return Lemma1Check(lam, eps_hat, sigma, bound, sigma <= bound + tol)


def lemma1_bound_check(G: WeightedGraph, H: WeightedGraph, ctx: DegreeContext | None = None, tol: float = 1e-6) -> bool:
    return lemma1_check(G, H, ctx, tol).holds
