"""Immutable weighted undirected graphs with identity-preserving subgraphs.

Vertices are the dense integers ``0..n-1``.  Subgraphs keep the full vertex
range, so graphs built from different pieces of one input can be summed
directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _csgraph_components


class GraphError(ValueError):
    """Invalid graph input (self-loop, bad weight, vertex out of range)."""


def vertex_set(S: Iterable[int], n: int | None = None) -> np.ndarray:
    """Normalise ``S`` to a strictly increasing int64 array, checking ids < n."""
    arr = np.unique(np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64))
    if arr.size and (arr[0] < 0 or (n is not None and arr[-1] >= n)):
        raise GraphError(f"vertex set has ids outside [0, {n})")
    return arr


def _mask(S: Iterable[int], n: int) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[vertex_set(S, n)] = True
    return m


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Canonical edge list (u < v, sorted, merged) over vertices ``0..n-1``."""

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    weighted_degree: np.ndarray = field(repr=False)
    unweighted_degree: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return int(self.u.size)

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def edge_keys(self) -> np.ndarray:
        return self.u * self.n + self.v

    def weight_map(self) -> dict[tuple[int, int], float]:
        return {(a, b): c for a, b, c in self.edges()}

    def total_weight(self) -> float:
        return float(self.w.sum())

    def is_unweighted(self) -> bool:
        return bool(np.all(self.w == 1.0))

    def is_integral(self) -> bool:
        return bool(np.all(self.w == np.floor(self.w)))

    def adjacency(self, weighted: bool = True) -> sp.csr_matrix:
        data = self.w if weighted else np.ones(self.m)
        A = sp.coo_matrix(
            (np.concatenate([data, data]), (np.concatenate([self.u, self.v]), np.concatenate([self.v, self.u]))),
            shape=(self.n, self.n),
        )
        return A.tocsr()

    def laplacian(self) -> sp.csr_matrix:
        return (sp.diags(self.weighted_degree) - self.adjacency()).tocsr()

    def dense_laplacian(self) -> np.ndarray:
        L = np.zeros((self.n, self.n))
        np.add.at(L, (self.u, self.v), -self.w)
        np.add.at(L, (self.v, self.u), -self.w)
        L[np.diag_indices(self.n)] = self.weighted_degree
        return L

    def scaled(self, c: float) -> WeightedGraph:
        if not c > 0:
            raise GraphError("scale factor must be positive")
        return _from_canonical(self.n, self.u, self.v, self.w * c)

    def with_n(self, n: int) -> WeightedGraph:
        """Same edges over a larger vertex range."""
        if n < self.n:
            raise GraphError("cannot shrink the vertex range")
        return _from_canonical(n, self.u, self.v, self.w)

    def neighbors(self, x: int) -> np.ndarray:
        sel = (self.u == x) | (self.v == x)
        return np.where(self.u[sel] == x, self.v[sel], self.u[sel])

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, m={self.m})"


def _from_canonical(n: int, u: np.ndarray, v: np.ndarray, w: np.ndarray) -> WeightedGraph:
    u = np.ascontiguousarray(u, dtype=np.int64)
    v = np.ascontiguousarray(v, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    wd = np.bincount(u, weights=w, minlength=n) + np.bincount(v, weights=w, minlength=n)
    ud = np.bincount(u, minlength=n) + np.bincount(v, minlength=n)
    for a in (u, v, w, wd, ud):
        a.setflags(write=False)
    return WeightedGraph(n, u, v, w, wd.astype(np.float64), ud.astype(np.int64))


def build_graph(n: int, raw_edges: Iterable[Sequence[float]] | None = None, *, u=None, v=None, w=None) -> WeightedGraph:
    """Build a canonical graph, merging parallel edges by adding weights.

    Either pass ``raw_edges`` as ``(u, v, w)`` triples (``w`` defaults to 1 for
    pairs) or the three parallel arrays ``u``, ``v``, ``w``.
    """
    if n < 0:
        raise GraphError("n must be nonnegative")
    if raw_edges is not None:
        rows = [tuple(e) for e in raw_edges]
        u = np.array([r[0] for r in rows], dtype=np.int64)
        v = np.array([r[1] for r in rows], dtype=np.int64)
        w = np.array([r[2] if len(r) > 2 else 1.0 for r in rows], dtype=np.float64)
    else:
        u = np.asarray(u if u is not None else [], dtype=np.int64)
        v = np.asarray(v if v is not None else [], dtype=np.int64)
        w = np.ones(u.size) if w is None else np.asarray(w, dtype=np.float64)
    if not (u.shape == v.shape == w.shape):
        raise GraphError("edge arrays must have equal length")
    bad = (u < 0) | (u >= n) | (v < 0) | (v >= n)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise GraphError(f"edge {i} ({u[i]}, {v[i]}) has a vertex outside [0, {n})")
    loops = u == v
    if loops.any():
        i = int(np.flatnonzero(loops)[0])
        raise GraphError(f"edge {i} ({u[i]}, {v[i]}) is a self-loop")
    badw = ~(np.isfinite(w) & (w > 0))
    if badw.any():
        i = int(np.flatnonzero(badw)[0])
        raise GraphError(f"edge {i} ({u[i]}, {v[i]}) has invalid weight {w[i]!r}")
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    if lo.size == 0:
        return _from_canonical(n, lo, hi, w)
    key = lo * n + hi
    order = np.argsort(key, kind="stable")
    key, w = key[order], w[order]
    uniq, start = np.unique(key, return_index=True)
    # reduceat sums in stable input order, so merging is deterministic
    wsum = np.add.reduceat(w, start)
    return _from_canonical(n, uniq // n, uniq % n, wsum)


def empty_graph(n: int) -> WeightedGraph:
    return build_graph(n, [])


def edge_subgraph(G: WeightedGraph, keep: np.ndarray) -> WeightedGraph:
    """Graph on the same vertices with the edges selected by boolean/int index ``keep``."""
    return _from_canonical(G.n, G.u[keep], G.v[keep], G.w[keep])


def induced_subgraph(G: WeightedGraph, S: Iterable[int]) -> WeightedGraph:
    """G(S): edges with both ends in S; vertex ids (and n) are preserved."""
    mask = _mask(S, G.n)
    return edge_subgraph(G, mask[G.u] & mask[G.v])


def graph_sum(G: WeightedGraph, H: WeightedGraph) -> WeightedGraph:
    if G.n != H.n:
        raise GraphError(f"cannot add graphs on {G.n} and {H.n} vertices")
    return build_graph(
        G.n,
        u=np.concatenate([G.u, H.u]),
        v=np.concatenate([G.v, H.v]),
        w=np.concatenate([G.w, H.w]),
    )


def sum_graphs(n: int, graphs: Iterable[WeightedGraph], scales: Iterable[float] | None = None) -> WeightedGraph:
    """Sum of ``scale_i * G_i``; all graphs must live on ``n`` vertices."""
    graphs = list(graphs)
    scales = [1.0] * len(graphs) if scales is None else list(scales)
    for H in graphs:
        if H.n != n:
            raise GraphError(f"cannot add a graph on {H.n} vertices into one on {n}")
    if not graphs:
        return empty_graph(n)
    return build_graph(
        n,
        u=np.concatenate([H.u for H in graphs]),
        v=np.concatenate([H.v for H in graphs]),
        w=np.concatenate([H.w * s for H, s in zip(graphs, scales)]),
    )


def is_edge_subset(H: WeightedGraph, G: WeightedGraph) -> bool:
    """True iff every edge of H is also an edge of G (support containment)."""
    if H.n > G.n:
        return False
    return bool(np.isin(H.u * G.n + H.v, G.edge_keys()).all())


@dataclass(frozen=True)
class DegreeContext:
    """Degrees of an enclosing graph, used for volumes and conductance.

    Measuring a subgraph against the degrees of its parent realises G{B}: the
    implicit self-loops never enter a quadratic form, only the degree matrix.
    """

    degrees: np.ndarray

    @classmethod
    def of(cls, G: WeightedGraph) -> DegreeContext:
        return cls(G.unweighted_degree)

    @classmethod
    def weighted(cls, G: WeightedGraph) -> DegreeContext:
        return cls(G.weighted_degree)

    @property
    def n(self) -> int:
        return int(self.degrees.size)

    def check_covers(self, G: WeightedGraph) -> None:
        if self.n != G.n:
            raise GraphError("degree context length differs from graph size")
        if np.any(self.degrees < G.unweighted_degree):
            raise GraphError("degree context is smaller than the subgraph degrees")


def volume(S: Iterable[int], ctx: DegreeContext):
    """Sum of context degrees over S (an int for integer contexts)."""
    idx = vertex_set(S, ctx.n)
    total = ctx.degrees[idx].sum()
    return int(total) if np.issubdtype(ctx.degrees.dtype, np.integer) else float(total)


def boundary_mask(G: WeightedGraph, S: Iterable[int], B: Iterable[int] | None = None) -> np.ndarray:
    s = _mask(S, G.n)
    b = np.ones(G.n, dtype=bool) if B is None else _mask(B, G.n)
    if np.any(s & ~b):
        raise GraphError("S is not a subset of B")
    rest = b & ~s
    return (s[G.u] & rest[G.v]) | (rest[G.u] & s[G.v])


def boundary_edges(S: Iterable[int], B: Iterable[int] | None, G: WeightedGraph) -> list[tuple[int, int, float]]:
    """Edges of G with one end in S and the other in B - S."""
    sel = boundary_mask(G, S, B)
    return list(zip(G.u[sel].tolist(), G.v[sel].tolist(), G.w[sel].tolist()))


def component_labels(n: int, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Label each vertex by the smallest vertex id in its component."""
    A = sp.coo_matrix((np.ones(u.size), (u, v)), shape=(n, n))
    _, raw = _csgraph_components(A, directed=False)
    first = np.full(raw.max() + 1 if n else 0, n, dtype=np.int64)
    np.minimum.at(first, raw, np.arange(n))
    return first[raw]


def connected_components(G: WeightedGraph, active_edges: np.ndarray | None = None) -> list[np.ndarray]:
    """Components of V under the selected edges (all edges by default).

    Returned sorted by smallest member; isolated vertices are singletons.
    """
    sel = slice(None) if active_edges is None else active_edges
    labels = component_labels(G.n, G.u[sel], G.v[sel])
    return [np.flatnonzero(labels == r) for r in np.unique(labels)]


@dataclass(frozen=True)
class Decomposition:
    """Partition of the vertices together with the edges crossing it."""

    parts: list[np.ndarray]
    boundary: np.ndarray  # indices into the graph's edge arrays

    @classmethod
    def of(cls, G: WeightedGraph, parts: Sequence[Iterable[int]]) -> Decomposition:
        parts = [vertex_set(P, G.n) for P in parts]
        label = np.full(G.n, -1)
        for i, P in enumerate(parts):
            if np.any(label[P] >= 0):
                raise GraphError("decomposition parts overlap")
            label[P] = i
        if np.any(label < 0):
            raise GraphError("decomposition parts do not cover V")
        return cls(parts, np.flatnonzero(label[G.u] != label[G.v]))

