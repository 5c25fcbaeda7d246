"""Degree-weighted Bernoulli edge sampling with 1/p reweighting."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._rng import edge_uniforms
from .graph import DegreeContext, GraphError, WeightedGraph, _from_canonical, vertex_set


@dataclass(frozen=True)
class SampleParams:
    """Sampling intensity.

    ``paper`` mode derives Upsilon = (12 k / (eps * lam))^2 with
    k = max(log2(3/p), log2 n); ``practical`` mode uses ``upsilon_override``.
    """

    epsilon: float
    fail_prob: float
    lam: float
    mode: str = "paper"
    upsilon_override: float | None = None

    def __post_init__(self):
        if self.mode not in ("paper", "practical"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")
        if self.mode == "practical":
            if self.upsilon_override is None or not self.upsilon_override > 1:
                raise ValueError("practical mode needs upsilon_override > 1")
        else:
            if not (0 < self.epsilon < 0.5 and 0 < self.fail_prob < 0.5):
                raise ValueError("epsilon and fail_prob must lie in (0, 1/2)")
            if not (0 < self.lam <= 2):
                raise ValueError("lam must lie in (0, 2]")

    def upsilon(self, n: int) -> float:
        if self.mode == "practical":
            return float(self.upsilon_override)
        k = max(math.log2(3.0 / self.fail_prob), math.log2(max(n, 2)))
        return max((12.0 * k / (self.epsilon * self.lam)) ** 2, 1.0 + 1e-12)


@dataclass(frozen=True)
class SampleResult:
    graph: WeightedGraph
    kept_edges: int
    upsilon_used: float
    seed: int
    mode: str
    probabilities: np.ndarray  # per input edge of F, in the order given


def edge_probability(d_i: int, d_j: int, upsilon: float) -> float:
    if d_i < 1 or d_j < 1:
        raise GraphError("edge endpoints must have positive degree")
    return min(1.0, upsilon / min(d_i, d_j))


def edge_probabilities(ctx: DegreeContext, u: np.ndarray, v: np.ndarray, upsilon: float) -> np.ndarray:
    dmin = np.minimum(ctx.degrees[u], ctx.degrees[v]).astype(np.float64)
    if np.any(dmin < 1):
        raise GraphError("edge endpoints must have positive degree")
    return np.minimum(1.0, upsilon / dmin)


def sample_subgraph(S: Iterable[int], F: WeightedGraph, ctx: DegreeContext, params: SampleParams, seed: int) -> SampleResult:
    """Keep each edge of F independently with probability p_e, at weight 1/p_e.

    F must be a weight-1 graph whose edges lie inside S; degrees come from
    ``ctx`` (the graph F was cut out of).
    """
    S = vertex_set(S, ctx.n)
    if F.n != ctx.n:
        raise GraphError("edge set and degree context disagree on n")
    if F.m and not F.is_unweighted():
        raise GraphError("sampling expects a weight-1 edge set")
    inside = np.zeros(ctx.n, dtype=bool)
    inside[S] = True
    if F.m and not np.all(inside[F.u] & inside[F.v]):
        raise GraphError("edge set is not contained in G(S)")
    ups = params.upsilon(ctx.n)
    if F.m == 0:
        return SampleResult(F, 0, ups, int(seed), params.mode, np.zeros(0))
    p = edge_probabilities(ctx, F.u, F.v, ups)
    keep = edge_uniforms(seed, F.u, F.v) < p
    G = _from_canonical(F.n, F.u[keep], F.v[keep], 1.0 / p[keep])
    return SampleResult(G, int(keep.sum()), ups, int(seed), params.mode, p)


def sample_graph(G: WeightedGraph, params: SampleParams, seed: int, ctx: DegreeContext | None = None) -> SampleResult:
    """Sample the whole weight-1 graph G against its own degrees (or ``ctx``)."""
    ctx = DegreeContext.of(G) if ctx is None else ctx
    return sample_subgraph(np.arange(G.n), G, ctx, params, seed)


def upsilon_for_target(ctx: DegreeContext, u: np.ndarray, v: np.ndarray, target: float) -> float:
    """Smallest Upsilon whose expected kept-edge count sum_e min(1, Y/dmin_e) reaches ``target``."""
    dmin = np.sort(np.minimum(ctx.degrees[u], ctx.degrees[v]).astype(np.float64))
    if dmin.size == 0 or target >= dmin.size:
        return float(max(dmin.max(initial=2.0), 2.0))
    # f(Y) = #(dmin <= Y) + Y * sum_{dmin > Y} 1/dmin is increasing and piecewise linear
    inv_suffix = np.concatenate([np.cumsum((1.0 / dmin)[::-1])[::-1], [0.0]])
    j = np.arange(dmin.size + 1)
    lo = np.concatenate([[0.0], dmin])
    hi = np.concatenate([dmin, [math.inf]])
    with np.errstate(divide="ignore"):
        y = np.where(inv_suffix > 0, (target - j) / inv_suffix, math.inf)
    ok = np.flatnonzero((lo <= y) & (y <= hi))
    return float(max(y[ok[0]], 2.0)) if ok.size else float(max(dmin[-1], 2.0))
