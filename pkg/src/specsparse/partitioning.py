"""Partition, Partition2 and ApproxCut.

``partition`` realises the Partition contract with a spectral sweep: it
orders the vertices of G{B} by approximate low eigenvectors of the normalized
Laplacian (original degrees on the diagonal) and returns the best balanced
prefix, or the empty set if that prefix is not sparse enough.  The two driver
loops above it follow their pseudocode line by line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
import scipy.sparse.linalg as spla

from ._rng import child_seed, generator
from .cuts import Cut, _local_edges, best_prefixes, conductance
from .graph import DegreeContext, WeightedGraph, vertex_set
from .spectral import DENSE_THRESHOLD
from .trace import Trace

_ONE = Fraction(1)


@dataclass(frozen=True)
class ContractConstants:
    c1: float = 1.0
    c2: float = 1.0

    def f1(self, tau: float, m: int) -> float:
        return self.c1 * tau**2 / math.log2(max(m, 2)) ** 3

    def f2(self, phi: float, m: int) -> float:
        return self.c2 * phi**2 / math.log2(max(m, 2)) ** 4


@dataclass(frozen=True)
class PartitionOutcome:
    D: np.ndarray
    conductance: Fraction
    vol_D: int
    vol_V: int
    rounds_used: int
    seed: int

    @property
    def empty(self) -> bool:
        return self.D.size == 0

    @property
    def vol_fraction(self) -> float:
        return self.vol_D / self.vol_V if self.vol_V else 0.0


def _restarts(p: float) -> int:
    return max(1, math.ceil(math.log2(1.0 / p)))


def _spectrum(G: WeightedGraph, active: np.ndarray, d: np.ndarray, seed: int, cache: dict | None):
    key = active.tobytes()
    if cache is not None and key in cache:
        return cache[key]
    sub = G.laplacian()[active][:, active]
    s = 1.0 / np.sqrt(d[active])
    if active.size <= DENSE_THRESHOLD:
        N = sub.toarray() * s[:, None] * s[None, :]
        vals, vecs = np.linalg.eigh(N)
    else:
        import scipy.sparse as sp

        N = sp.diags(s) @ sub @ sp.diags(s)
        v0 = generator(seed, "eigsh").standard_normal(active.size)
        vals, vecs = spla.eigsh(N, k=min(8, active.size - 1), which="SA", v0=v0)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    out = (vals, vecs, s, _local_edges(G, active))
    if cache is not None:
        cache[key] = out
    return out


def partition(G: WeightedGraph, B: Iterable[int] | None, ctx: DegreeContext | None, tau: float, p: float, seed: int,
              *, cache: dict | None = None, trace: Trace | None = None) -> PartitionOutcome:
    """Sweep-cut partitioner for G{B} honouring vol D <= (7/8) vol B and phi'_B(D) <= tau.

    Each of ceil(log2(1/p)) restarts sweeps an ordering built from the
    normalized-Laplacian eigenvectors: the Fiedler vector first, then seeded
    random vectors smoothed by two steps of inverse iteration.  The sparsest
    balanced prefix over all restarts wins (ties: earliest restart).
    """
    ctx = DegreeContext.of(G) if ctx is None else ctx
    B = np.arange(G.n) if B is None else vertex_set(B, G.n)
    d = np.asarray(ctx.degrees, dtype=np.float64)
    vol_B = int(np.asarray(ctx.degrees)[B].sum())
    active = B[d[B] > 0]
    if trace is not None:
        trace.count("partition")
        trace.log("partition", tau, p, vol_B)
    none = PartitionOutcome(B[:0], _ONE, 0, vol_B, 1, seed)
    if active.size < 2:
        return none
    vals, vecs, s, local = _spectrum(G, active, d, seed, cache)
    lam = np.maximum(vals, 1e-12)
    rng = generator(seed, "restarts")
    scores = []
    for t in range(_restarts(p)):
        if t == 0:
            y = vecs[:, 1]
        else:
            g = rng.standard_normal(vals.size - 1)
            y = vecs[:, 1:] @ (g * (lam[1] / lam[1:]) ** 2)
        x = y * s
        scores += [x, -x]
    # stable sort on ascending ids breaks ties by vertex id
    orders = active[np.argsort(np.stack(scores), axis=1, kind="stable")]
    best: Cut | None = None
    for cut in best_prefixes(G, orders, active, ctx, local=local):
        if cut.empty:
            continue
        if best is None or cut.conductance < best.conductance:
            best = cut
    if best is None:
        return none
    # the sweep only admits prefixes with vol <= vol(B)/2, well inside the 7/8 volume limit
    assert 8 * best.vol_S <= 7 * vol_B
    if best.conductance > Fraction(tau):
        return none
    return PartitionOutcome(best.S, best.conductance, best.vol_S, vol_B, 1, seed)


def partition2(G: WeightedGraph, B: Iterable[int] | None, ctx: DegreeContext | None, theta: float, p: float, eps: float, seed: int,
               *, cache: dict | None = None, trace: Trace | None = None) -> PartitionOutcome:
    """Repeated Partition on the shrinking remainder W_j until 1/5 of the volume is cut or r rounds pass."""
    ctx = DegreeContext.of(G) if ctx is None else ctx
    B = np.arange(G.n) if B is None else vertex_set(B, G.n)
    deg = np.asarray(ctx.degrees)
    vol_V = int(deg[B].sum())
    r = max(0, math.ceil(math.log2(1.0 / eps)))
    if trace is not None:
        trace.count("partition2")
        trace.log("partition2", theta, p, eps, r, vol_V)
    W, j, parts = B, 0, []
    while j < r and 5 * int(deg[W].sum()) >= 4 * vol_V:
        j += 1
        Dj = partition(G, W, ctx, theta / 9, p / r, child_seed(seed, "p2", j), cache=cache, trace=trace).D
        parts.append(Dj)
        W = np.setdiff1d(W, Dj)
    D = np.unique(np.concatenate(parts)) if parts else B[:0]
    cut = conductance(G, D, B, ctx)
    return PartitionOutcome(D, cut.conductance, cut.vol_S, vol_V, j, seed)


def approx_cut(G: WeightedGraph, phi: float, p: float, seed: int, B: Iterable[int] | None = None, ctx: DegreeContext | None = None,
               *, cache: dict | None = None, trace: Trace | None = None) -> PartitionOutcome:
    """Repeated Partition2 with (2/23) phi on G{V_j}; returns D with vol D <= (23/25) vol V and phi(D) <= phi."""
    ctx = DegreeContext.of(G) if ctx is None else ctx
    B = np.arange(G.n) if B is None else vertex_set(B, G.n)
    deg = np.asarray(ctx.degrees)
    vol_V = int(deg[B].sum())
    inB = np.zeros(G.n, dtype=bool)
    inB[B] = True
    m = int(np.count_nonzero(inB[G.u] & inB[G.v]))
    r = math.ceil(math.log2(m)) if m > 0 else 0
    eps = min(1.0 / (2 * r), 0.2) if r > 0 else 0.2
    cache = {} if cache is None else cache
    if trace is not None:
        trace.count("approx_cut")
        trace.log("approx_cut", phi, p, r, eps, vol_V)
    V, j, parts = B, 0, []
    while j < r and 5 * int(deg[V].sum()) >= 4 * vol_V:
        j += 1
        Dj = partition2(G, V, ctx, (2.0 / 23.0) * phi, p / (2 * r), eps, child_seed(seed, "ac", j), cache=cache, trace=trace).D
        parts.append(Dj)
        V = np.setdiff1d(V, Dj)
    D = np.unique(np.concatenate(parts)) if parts else B[:0]
    cut = conductance(G, D, B, ctx)
    return PartitionOutcome(D, cut.conductance, cut.vol_S, vol_V, j, seed)
