"""Conductance under a degree context, sweep cuts, and exhaustive cut oracles.

Conductance counts crossing edges (weights are ignored) and measures volume
with the degrees of an enclosing graph.  The exhaustive oracles enumerate all
subsets of at most ``ENUM_LIMIT`` vertices and settle every comparison in
exact rational arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .graph import DegreeContext, GraphError, WeightedGraph, vertex_set

ENUM_LIMIT = 20
_ONE = Fraction(1)


@dataclass(frozen=True)
class Cut:
    S: np.ndarray
    conductance: Fraction
    vol_S: int
    vol_complement: int
    boundary_count: int

    @property
    def empty(self) -> bool:
        return self.S.size == 0

    def __float__(self) -> float:
        return float(self.conductance)


def _ratio(cross: int, vol_s: int, vol_rest: int) -> Fraction:
    # empty side and zero-volume sides carry no information: conductance 1
    den = min(vol_s, vol_rest)
    if den <= 0:
        return _ONE
    return Fraction(int(cross), int(den))


def as_fraction(x) -> Fraction:
    """Exact value of a threshold; floats snap to the nearest fraction with denominator <= 10**12."""
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    return Fraction(float(x)).limit_denominator(10**12)


def _setup(G: WeightedGraph, B, ctx: DegreeContext | None):
    ctx = DegreeContext.of(G) if ctx is None else ctx
    if ctx.n != G.n:
        raise GraphError("degree context length differs from graph size")
    B = np.arange(G.n) if B is None else vertex_set(B, G.n)
    return B, ctx


def conductance(G: WeightedGraph, S: Iterable[int], B: Iterable[int] | None = None, ctx: DegreeContext | None = None) -> Cut:
    """phi'_B(S) = |E(S, B - S)| / min(vol S, vol(B - S)), exactly."""
    B, ctx = _setup(G, B, ctx)
    S = vertex_set(S, G.n)
    inB = np.zeros(G.n, dtype=bool)
    inB[B] = True
    if not np.all(inB[S]):
        raise GraphError("S is not a subset of B")
    inS = np.zeros(G.n, dtype=bool)
    inS[S] = True
    rest = inB & ~inS
    cross = int(np.count_nonzero((inS[G.u] & rest[G.v]) | (rest[G.u] & inS[G.v])))
    deg = np.asarray(ctx.degrees)
    vs, vr = int(deg[S].sum()), int(deg[rest].sum())
    phi = _ONE if S.size == 0 or B.size == 1 else _ratio(cross, vs, vr)
    return Cut(S, phi, vs, vr, cross)


def _local_edges(G: WeightedGraph, B: np.ndarray):
    """Edges of G(B) as positions in B, plus the global-to-position map."""
    pos = np.full(G.n, -1, dtype=np.int64)
    pos[B] = np.arange(B.size)
    keep = (pos[G.u] >= 0) & (pos[G.v] >= 0)
    return pos[G.u[keep]], pos[G.v[keep]], pos


def sweep_profile(G: WeightedGraph, order: np.ndarray, B: np.ndarray, ctx: DegreeContext, local=None):
    """Boundary counts and volumes of every prefix of ``order`` (global ids within B).

    Entry k describes the prefix of length k + 1.  ``order`` may be a 2-D
    array holding one ordering per row, in which case both results are 2-D.
    ``local`` caches ``_local_edges(G, B)`` across sweeps of the same B.
    """
    lu, lv, local_of = _local_edges(G, B) if local is None else local
    orders = np.atleast_2d(order)
    R, b = orders.shape[0], B.size
    rank = np.empty((R, b), dtype=np.int64)
    rank[np.arange(R)[:, None], local_of[orders]] = np.arange(b)
    ru, rv = rank[:, lu], rank[:, lv]
    shift = (np.arange(R) * b)[:, None]
    size = R * b
    deg_in = (np.bincount((ru + shift).ravel(), minlength=size) + np.bincount((rv + shift).ravel(), minlength=size)).reshape(R, b)
    internal = np.bincount((np.maximum(ru, rv) + shift).ravel(), minlength=size).reshape(R, b)
    cross = np.cumsum(deg_in, axis=1) - 2 * np.cumsum(internal, axis=1)
    vol = np.cumsum(np.asarray(ctx.degrees)[orders].astype(np.int64), axis=1)
    if np.ndim(order) == 1:
        return cross[0], vol[0]
    return cross, vol


def sweep_cut(G: WeightedGraph, ordering: np.ndarray, ctx: DegreeContext | None = None, B: Iterable[int] | None = None) -> Cut:
    """Best-conductance prefix of B sorted by ``ordering`` (ties by vertex id).

    ``ordering`` has one value per vertex of G.  Only prefixes with volume at
    most vol(B)/2 are considered; if none qualifies the empty cut is returned.
    """
    B, ctx = _setup(G, B, ctx)
    ordering = np.asarray(ordering, dtype=np.float64)
    if ordering.shape != (G.n,) or not np.all(np.isfinite(ordering[B])):
        raise GraphError("ordering must be a finite vector with one value per vertex")
    order = B[np.lexsort((B, ordering[B]))]
    return _best_prefix(G, order, B, ctx)


def _best_prefix(G: WeightedGraph, order: np.ndarray, B: np.ndarray, ctx: DegreeContext, limit: Fraction = Fraction(1, 2), local=None) -> Cut:
    return best_prefixes(G, order[None, :], B, ctx, limit, local)[0]


def best_prefixes(G: WeightedGraph, orders: np.ndarray, B: np.ndarray, ctx: DegreeContext, limit: Fraction = Fraction(1, 2),
                  local=None) -> list[Cut]:
    """The best prefix cut of each row of ``orders``, with volume capped at ``limit`` * vol(B)."""
    total = int(np.asarray(ctx.degrees)[B].sum())
    empty = Cut(B[:0], _ONE, 0, total, 0)
    if B.size < 2:
        return [empty] * orders.shape[0]
    local = _local_edges(G, B) if local is None else local
    # batch rows only while the working arrays stay small
    chunk = max(1, 65536 // max(local[0].size, B.size))
    parts = [sweep_profile(G, orders[r:r + chunk], B, ctx, local) for r in range(0, orders.shape[0], chunk)]
    cross = np.concatenate([c for c, _ in parts])[:, :-1]
    vol = np.concatenate([v for _, v in parts])[:, :-1]
    ok = (vol > 0) & (vol * limit.denominator <= total * limit.numerator)
    den = np.minimum(vol, total - vol).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ok & (den > 0), cross / den, np.inf)
    best = np.argmin(ratio, axis=1)
    out = []
    for row, k in enumerate(best.tolist()):
        if not math.isfinite(ratio[row, k]):
            out.append(empty)
            continue
        c, v = int(cross[row, k]), int(vol[row, k])
        out.append(Cut(np.sort(orders[row, : k + 1]), _ratio(c, v, total - v), v, total - v, c))
    return out


def _enumerate(G: WeightedGraph, B: np.ndarray, ctx: DegreeContext):
    """All nonempty proper subsets of B as bitmasks with crossing counts and volumes."""
    b = B.size
    if b > ENUM_LIMIT:
        raise GraphError(f"exhaustive cut search is limited to {ENUM_LIMIT} vertices (got {b}); use the sweep-based partitioner")
    lu, lv, _ = _local_edges(G, B)
    masks = np.arange(1, (1 << b) - 1, dtype=np.int64)
    deg = np.asarray(ctx.degrees)[B].astype(np.int64)
    vol = np.zeros(masks.size, dtype=np.int64)
    for i in range(b):
        vol += ((masks >> i) & 1) * deg[i]
    cross = np.zeros(masks.size, dtype=np.int64)
    for a, c in zip(lu.tolist(), lv.tolist()):
        cross += ((masks >> a) ^ (masks >> c)) & 1
    return masks, cross, vol, int(deg.sum())


def _members(B: np.ndarray, mask: int) -> np.ndarray:
    return B[[i for i in range(B.size) if (mask >> i) & 1]]


def _lex_key(B: np.ndarray, mask: int):
    return tuple(_members(B, mask).tolist())


def exact_sparsest_cut(G: WeightedGraph, B: Iterable[int] | None = None, ctx: DegreeContext | None = None) -> Cut:
    """Minimum of phi'_B(S) over nonempty proper S of B, by enumeration.

    Ties go to the smaller vol(S), then to the lexicographically smaller S.
    A single-vertex (or empty) B has conductance 1 by convention.
    """
    B, ctx = _setup(G, B, ctx)
    if B.size < 2:
        return Cut(B[:0], _ONE, 0, int(np.asarray(ctx.degrees)[B].sum()), 0)
    masks, cross, vol, total = _enumerate(G, B, ctx)
    den = np.minimum(vol, total - vol)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(den > 0, cross / np.maximum(den, 1), 1.0)
    best = float(ratio.min())
    cand = np.flatnonzero(ratio <= best * (1 + 1e-9) + 1e-300)

    def key(i):
        phi = _ratio(int(cross[i]), int(vol[i]), total - int(vol[i]))
        return (phi, int(vol[i]), _lex_key(B, int(masks[i])))

    i = min(cand.tolist(), key=key)
    S = _members(B, int(masks[i]))
    return Cut(S, key(i)[0], int(vol[i]), total - int(vol[i]), int(cross[i]))


def max_volume_sparse_cut(G: WeightedGraph, B: Iterable[int] | None, ctx: DegreeContext | None, phi: float) -> Cut | None:
    """The S of largest volume with vol S <= vol(B)/2 and phi'_B(S) <= phi, or None."""
    B, ctx = _setup(G, B, ctx)
    if B.size < 2:
        return None
    masks, cross, vol, total = _enumerate(G, B, ctx)
    den = np.minimum(vol, total - vol)
    small = 2 * vol <= total
    loose = small & (den > 0) & (cross <= float(phi) * den * (1 + 1e-9) + 1e-12)
    cand = np.flatnonzero(loose)
    fphi = as_fraction(phi)
    exact = [i for i in cand.tolist() if _ratio(int(cross[i]), int(vol[i]), total - int(vol[i])) <= fphi]
    if not exact:
        return None
    i = min(exact, key=lambda i: (-int(vol[i]), _lex_key(B, int(masks[i]))))
    S = _members(B, int(masks[i]))
    return Cut(S, _ratio(int(cross[i]), int(vol[i]), total - int(vol[i])), int(vol[i]), total - int(vol[i]), int(cross[i]))


def default_decomposition_phi(G: WeightedGraph) -> float:
    """(2 log_{4/3} vol V)^{-1}."""
    return 1.0 / (2.0 * math.log(max(2 * G.m, 2)) / math.log(4.0 / 3.0))


def ideal_decomp(G: WeightedGraph, B: Iterable[int] | None = None, phi: float | None = None, ctx: DegreeContext | None = None) -> list[np.ndarray]:
    """Recursive certificate decomposition driven by exact maximum-volume sparse cuts.

    Every returned part has phi'-conductance at least phi/3 and at most half
    of the edges cross parts.  Exponential time: every part must have at most
    ``ENUM_LIMIT`` vertices.
    """
    B, ctx = _setup(G, B, ctx)
    phi = default_decomposition_phi(G) if phi is None else phi

    def rec(B: np.ndarray) -> list[np.ndarray]:
        if exact_sparsest_cut(G, B, ctx).conductance >= as_fraction(phi):
            return [B]
        S = max_volume_sparse_cut(G, B, ctx, phi).S
        rest = np.setdiff1d(B, S)
        vol_s = int(np.asarray(ctx.degrees)[S].sum())
        vol_b = int(np.asarray(ctx.degrees)[B].sum())
        if 4 * vol_s <= vol_b:
            return [rest] + rec(S)
        return rec(rest) + rec(S)

    return rec(B)
