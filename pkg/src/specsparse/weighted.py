"""Sparsifiers for weighted graphs.

``bounded_sparsify`` splits integral weights into binary digits.  ``sparsify``
truncates real weights to a few significant bits, spreads each edge over the
levels where its bits are set, contracts the much heavier structure below
each level and sparsifies what is left.  ``sparsify2`` additionally keeps
clusters degree-homogeneous and pulls back at random, which bounds how much
weight any vertex gains.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._rng import child_seed, edge_uniforms
from .graph import GraphError, WeightedGraph, _from_canonical, build_graph, component_labels, is_edge_subset, sum_graphs
from .trace import Trace
from .unweighted import ContractViolation, SparsifyConfig, unwted_sparsify


def _config(config: SparsifyConfig | None, eps: float, p: float, seed: int) -> SparsifyConfig:
    if config is None:
        return SparsifyConfig(eps, p, seed=int(seed))
    return SparsifyConfig(eps, p, config.mode, config.density_threshold_override, config.phi_override, int(seed),
                          config.c1, config.c2, config.c3, config.c8)


# ---------------------------------------------------------------- integral weights

def bit_levels(G: WeightedGraph) -> list[tuple[int, WeightedGraph]]:
    """G = sum 2^i G_i with weight-1 graphs G_i, one per binary digit of the weights."""
    if G.m and not G.is_integral():
        raise GraphError("bounded sparsification needs integral weights >= 1")
    if G.m == 0:
        return []
    w = np.rint(G.w).astype(np.int64)
    if np.any(w < 1):
        raise GraphError("bounded sparsification needs integral weights >= 1")
    out = []
    for i in range(int(w.max()).bit_length()):
        on = ((w >> i) & 1).astype(bool)
        if on.any():
            out.append((i, _from_canonical(G.n, G.u[on], G.v[on], np.ones(int(on.sum())))))
    return out


def bounded_sparsify(G: WeightedGraph, eps: float, p: float, seed: int, *, config: SparsifyConfig | None = None,
                     trace: Trace | None = None) -> WeightedGraph:
    """Sparsify each binary digit graph with budget p/u and recombine.

    Digit i is sparsified with seed ``child_seed(seed, "bit", i)``.
    """
    levels = bit_levels(G)
    if not levels:
        return G
    u = int(np.rint(G.w).max()).bit_length()
    parts, scales = [], []
    for i, Gi in levels:
        cfg = _config(config, eps, p / u, child_seed(seed, "bit", i))
        parts.append(unwted_sparsify(Gi, cfg, trace=trace))
        scales.append(float(2**i))
    if trace is not None:
        trace.count("bounded_sparsify")
    return sum_graphs(G.n, parts, scales)


# ---------------------------------------------------------------- truncation and levels

@dataclass(frozen=True)
class LevelDecomposition:
    """Truncated weights z_e = q_e 2^-r_e with Q <= q_e < 2Q, and the weight-1 level graphs.

    Bit j of q_e places edge e in level i = r_e - j, so that the truncated
    graph equals sum_i 2^-i G^i.
    """

    Q: int
    source: WeightedGraph
    r: np.ndarray
    q: np.ndarray
    levels: tuple  # (i, edge indices into source) in ascending i

    @property
    def z(self) -> np.ndarray:
        return np.ldexp(self.q.astype(np.float64), -self.r)

    def z_fraction(self, e: int) -> Fraction:
        return Fraction(int(self.q[e]), 1 << int(self.r[e]))

    def truncated_graph(self) -> WeightedGraph:
        G = self.source
        return _from_canonical(G.n, G.u, G.v, self.z)

    def level_graph(self, k: int) -> WeightedGraph:
        G = self.source
        idx = self.levels[k][1]
        return _from_canonical(G.n, G.u[idx], G.v[idx], np.ones(idx.size))

    def multiplicity(self) -> np.ndarray:
        return np.array([bin(int(x)).count("1") for x in self.q], dtype=np.int64)

    @property
    def max_levels_per_edge(self) -> int:
        return math.ceil(math.log2(2 * self.Q))


def truncate_weights(G: WeightedGraph, eps: float) -> LevelDecomposition:
    """Keep the top bits of every weight in (0, 1]; Q = ceil(6/eps)."""
    if not (0 < eps < 1):
        raise GraphError("eps must lie in (0, 1)")
    if G.m and (np.any(G.w <= 0) or np.any(G.w > 1)):
        bad = int(np.flatnonzero((G.w <= 0) | (G.w > 1))[0])
        raise GraphError(f"edge ({G.u[bad]}, {G.v[bad]}) has weight {G.w[bad]!r}; weights must lie in (0, 1], scale first")
    Q = math.ceil(6.0 / eps)
    mant, e = np.frexp(G.w)  # w = mant * 2^e, mant in [1/2, 1)
    k0 = Q.bit_length() - 1
    t = np.where(np.ldexp(mant, k0 + 1) >= Q, k0 + 1, k0 + 2)
    r = (t - e).astype(np.int64)
    q = np.floor(np.ldexp(mant, t)).astype(np.int64)
    assert np.all((Q <= q) & (q < 2 * Q))
    groups: dict[int, list[np.ndarray]] = {}
    for j in range(int(q.max(initial=0)).bit_length()):
        on = np.flatnonzero((q >> j) & 1)
        for i in np.unique(r[on] - j).tolist():
            groups.setdefault(int(i), []).append(on[r[on] - j == i])
    levels = tuple((i, np.sort(np.concatenate(groups[i]))) for i in sorted(groups))
    return LevelDecomposition(Q, G, r, q, levels)


# ---------------------------------------------------------------- clusters, contraction, pullback

@dataclass(frozen=True)
class ClusterMap:
    """Vertex -> cluster id (-1 for unmapped vertices of the ambient graph)."""

    labels: np.ndarray
    k: int
    delta: np.ndarray | None = None  # degree bucket per cluster, when bucketed

    @classmethod
    def from_parts(cls, n: int, parts: list, delta=None) -> "ClusterMap":
        labels = np.full(n, -1, dtype=np.int64)
        for j, P in enumerate(parts):
            P = np.asarray(P, dtype=np.int64)
            if np.any(labels[P] >= 0):
                raise GraphError("clusters overlap")
            labels[P] = j
        return cls(labels, len(parts), None if delta is None else np.asarray(delta, dtype=np.int64))

    def clusters(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        lab = self.labels[order]
        keep = lab >= 0
        order, lab = order[keep], lab[keep]
        cuts = np.searchsorted(lab, np.arange(self.k + 1))
        return [order[cuts[j]:cuts[j + 1]] for j in range(self.k)]


def contract(G: WeightedGraph, pi: ClusterMap, vertices=None) -> WeightedGraph:
    """Quotient of (W, E) under pi: weights summed per cluster pair, intra-cluster edges dropped.

    ``vertices`` restricts to edges inside W; every remaining endpoint must be mapped.
    """
    u, v, w = G.u, G.v, G.w
    if vertices is not None:
        inW = np.zeros(G.n, dtype=bool)
        inW[np.asarray(vertices, dtype=np.int64)] = True
        keep = inW[u] & inW[v]
        u, v, w = u[keep], v[keep], w[keep]
    a, b = pi.labels[u], pi.labels[v]
    if np.any(a < 0) or np.any(b < 0):
        bad = int(np.flatnonzero((a < 0) | (b < 0))[0])
        raise GraphError(f"edge ({u[bad]}, {v[bad]}) has an endpoint outside the cluster map")
    cross = a != b
    return build_graph(pi.k, u=a[cross], v=b[cross], w=w[cross])


def pullback(Ht: WeightedGraph, pi: ClusterMap, cand_u: np.ndarray, cand_v: np.ndarray, strategy: str = "first",
             seed: int = 0) -> WeightedGraph:
    """One candidate edge per edge of Ht, carrying its weight.

    ``first`` takes the lexicographically least candidate; ``random`` draws
    uniformly, keyed by (seed, cluster pair).
    """
    if strategy not in ("first", "random"):
        raise ValueError(f"unknown pullback strategy {strategy!r}")
    n = pi.labels.size
    cu = np.minimum(cand_u, cand_v).astype(np.int64)
    cv = np.maximum(cand_u, cand_v).astype(np.int64)
    a, b = pi.labels[cu], pi.labels[cv]
    ok = (a >= 0) & (b >= 0) & (a != b)
    cu, cv, a, b = cu[ok], cv[ok], a[ok], b[ok]
    key = np.minimum(a, b) * pi.k + np.maximum(a, b)
    order = np.lexsort((cv, cu, key))
    cu, cv, key = cu[order], cv[order], key[order]
    hk = Ht.u.astype(np.int64) * pi.k + Ht.v
    lo = np.searchsorted(key, hk, side="left")
    hi = np.searchsorted(key, hk, side="right")
    count = hi - lo
    if np.any(count == 0):
        bad = int(np.flatnonzero(count == 0)[0])
        raise GraphError(f"no candidate edge for contracted edge ({Ht.u[bad]}, {Ht.v[bad]})")
    if strategy == "first":
        pick = lo
    else:
        U = edge_uniforms(seed, Ht.u.astype(np.uint64), Ht.v.astype(np.uint64))
        pick = lo + np.minimum((U * count).astype(np.int64), count - 1)
    return build_graph(n, u=cu[pick], v=cv[pick], w=Ht.w)


def greedy_subdivide(cluster, eu: np.ndarray, ev: np.ndarray, delta: int, degrees: np.ndarray | None = None) -> list[np.ndarray]:
    """Split a cluster whose boundary (in the edge set eu-ev) exceeds 2^(delta+2).

    Vertices are pulled off in ascending id into a new part until its boundary
    first exceeds 2^delta; this repeats on the remainder.  Every vertex must
    have degree below 2^(delta+1) (``degrees`` defaults to degree in eu-ev).
    """
    C = np.unique(np.asarray(cluster, dtype=np.int64))
    eu = np.asarray(eu, dtype=np.int64)
    ev = np.asarray(ev, dtype=np.int64)
    n = int(max(C.max(initial=-1), eu.max(initial=-1), ev.max(initial=-1))) + 1
    local_deg = np.bincount(eu, minlength=n) + np.bincount(ev, minlength=n)
    deg = local_deg if degrees is None else np.asarray(degrees)
    if np.any(deg[C] >= 2 ** (delta + 1)):
        raise GraphError(f"cluster has a vertex of degree >= 2^{delta + 1}")
    if degrees is not None and np.any(deg[C] < 2**delta):
        raise GraphError(f"cluster has a vertex of degree < 2^{delta}")
    adj: dict[int, list[int]] = {}
    for a, b in zip(eu.tolist(), ev.tolist()):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    def boundary(S: set) -> int:
        return sum(1 for x in S for y in adj.get(x, ()) if y not in S)

    rest = set(C.tolist())
    parts = []
    while boundary(rest) > 2 ** (delta + 2):
        new: set = set()
        b = 0
        for x in sorted(rest):
            inside = sum(1 for y in adj.get(x, ()) if y in new)
            new.add(x)
            b += int(local_deg[x]) - 2 * inside
            if b > 2**delta:
                break
        parts.append(np.array(sorted(new), dtype=np.int64))
        rest -= new
    parts.append(np.array(sorted(rest), dtype=np.int64))
    return parts


# ---------------------------------------------------------------- blow-up

@dataclass(frozen=True)
class BlowUpReport:
    edge: np.ndarray  # aligned with the edges of the original graph
    vertex: np.ndarray

    @property
    def max_vertex(self) -> float:
        return float(self.vertex.max(initial=0.0))


def blow_up(G: WeightedGraph, Gt: WeightedGraph) -> BlowUpReport:
    """Edge blow-up w~/w (0 if dropped) and vertex blow-up (1/d_v) sum over incident edges."""
    if not is_edge_subset(Gt, G):
        raise GraphError("sparsifier uses an edge that is not in the original graph")
    pos = np.searchsorted(G.edge_keys(), Gt.edge_keys())
    edge = np.zeros(G.m)
    edge[pos] = Gt.w / G.w[pos]
    tot = np.bincount(G.u, weights=edge, minlength=G.n) + np.bincount(G.v, weights=edge, minlength=G.n)
    d = G.unweighted_degree
    vertex = np.where(d > 0, tot / np.maximum(d, 1), 0.0)
    return BlowUpReport(edge, vertex)


# ---------------------------------------------------------------- the level pipeline

@dataclass
class LevelRecord:
    level: int
    edges: int
    clusters: int  # k_i
    parts: int  # after subdivision (equals clusters for sparsify)
    kept: int


@dataclass
class SparsifyStats:
    Q: int
    l: int
    eps_hat: float
    budget: float
    levels: list = field(default_factory=list)

    @property
    def total_clusters(self) -> int:
        return sum(r.clusters for r in self.levels)

    @property
    def total_parts(self) -> int:
        return sum(r.parts for r in self.levels)


def _check_range(G: WeightedGraph, eps: float, p: float) -> None:
    if not (1.0 / max(G.n, 1) < eps < 1.0 / 3.0):
        raise GraphError(f"eps must lie in (1/n, 1/3) = ({1.0 / max(G.n, 1):.4g}, 0.3333); got {eps}")
    if not (0 < p < 0.5):
        raise GraphError("p must lie in (0, 1/2)")


def level_gap(n: int, eps: float) -> int:
    """l = ceil(log2(2 b c^2 n^3)) with b = c = 6/eps."""
    b = c = 6.0 / eps
    return math.ceil(math.log2(2.0 * b * c * c * float(n) ** 3))


class _PrefixComponents:
    """Components of V under all levels <= a threshold, advanced monotonically."""

    def __init__(self, G: WeightedGraph, dec: LevelDecomposition):
        self.G, self.dec = G, dec
        self.mask = np.zeros(G.m, dtype=bool)
        self.next = 0
        self.labels = np.arange(G.n)

    def upto(self, t: int) -> np.ndarray:
        changed = False
        while self.next < len(self.dec.levels) and self.dec.levels[self.next][0] <= t:
            self.mask[self.dec.levels[self.next][1]] = True
            self.next += 1
            changed = True
        if changed:
            self.labels = component_labels(self.G.n, self.G.u[self.mask], self.G.v[self.mask])
        return self.labels


def _run(G: WeightedGraph, eps: float, p: float, seed: int, config, trace, bucketed: bool, candidate_pool: str):
    _check_range(G, eps, p)
    n = G.n
    dec = truncate_weights(G, eps)
    l = level_gap(n, eps)
    eps_hat = eps / 6.0
    c8 = 1.0 if config is None else config.c8
    budget = p / (c8 * n * l * math.log2(n)) if bucketed else p / (2.0 * n * l)
    stats = SparsifyStats(dec.Q, l, eps_hat, budget)
    prefix = _PrefixComponents(G, dec)
    bucket = np.frexp(G.unweighted_degree.astype(np.float64))[1] - 1  # floor(log2 d)
    outs, scales = [], []
    for k, (i, idx) in enumerate(dec.levels):
        eu, ev = G.u[idx], G.v[idx]
        comp = prefix.upto(i - l) if i - l >= 0 else np.arange(n)
        key = comp * 64 + bucket if bucketed else comp
        cross = key[eu] != key[ev]
        live = np.unique(np.concatenate([key[eu[cross]], key[ev[cross]]]))
        Vi = np.unique(np.concatenate([eu, ev]))
        Vi = Vi[np.isin(key[Vi], live)]
        # group V^i by key into clusters, ascending key
        order = np.lexsort((Vi, key[Vi]))
        Vi = Vi[order]
        starts = np.flatnonzero(np.r_[True, key[Vi][1:] != key[Vi][:-1]])
        clusters = np.split(Vi, starts[1:]) if Vi.size else []
        parts, deltas = [], []
        for C in clusters:
            d = int(bucket[C[0]])
            if bucketed:
                sub = greedy_subdivide(C, eu, ev, d, G.unweighted_degree)
                _check_parts(sub, eu, ev, d)
                parts.extend(sub)
                deltas.extend([d] * len(sub))
            else:
                parts.append(C)
        stats_row = LevelRecord(i, int(idx.size), len(clusters), len(parts), 0)
        stats.levels.append(stats_row)
        if not parts:
            continue
        pi = ClusterMap.from_parts(n, parts, deltas if bucketed else None)
        H = contract(build_graph(n, u=eu, v=ev, w=np.ones(idx.size)), pi, vertices=np.concatenate(parts))
        Ht = bounded_sparsify(H, eps_hat, budget, child_seed(seed, "level", i), config=config, trace=trace)
        if bucketed and candidate_pool == "all":
            cu, cv = G.u, G.v
        else:
            cu, cv = eu, ev
        strategy = "random" if bucketed else "first"
        Gi = pullback(Ht, pi, cu, cv, strategy, child_seed(seed, "pullback", i))
        stats_row.kept = Gi.m
        outs.append(Gi)
        scales.append(math.ldexp(1.0, -i))
        if trace is not None:
            trace.log("level", i, int(idx.size), len(clusters), len(parts), Gi.m)
    if stats.total_clusters > 2 * n * l:
        raise ContractViolation(f"sum of cluster counts {stats.total_clusters} exceeds 2nl = {2 * n * l}")
    if trace is not None:
        trace.count("sum_k", stats.total_clusters)
        trace.count("sum_t", stats.total_parts)
    return sum_graphs(n, outs, scales), stats


def _check_parts(parts: list, eu: np.ndarray, ev: np.ndarray, delta: int) -> None:
    cap = 2 ** (delta + 2)
    lab = {}
    for j, P in enumerate(parts):
        for x in P.tolist():
            lab[x] = j
    for j, P in enumerate(parts):
        inP = np.isin(eu, P) ^ np.isin(ev, P)
        b = int(inP.sum())
        if b > cap or (len(parts) > 1 and b < 2**delta):
            raise ContractViolation(f"subdivided cluster has boundary {b}, outside [2^{delta}, 2^{delta + 2}]")


def sparsify(G: WeightedGraph, eps: float, p: float, seed: int, *, config: SparsifyConfig | None = None,
             trace: Trace | None = None, stats: list | None = None) -> WeightedGraph:
    """Sparsify a graph with weights in (0, 1]; the result uses only edges of G.

    Pass a list as ``stats`` to receive the per-level cluster counts.
    """
    out, st = _run(G, eps, p, seed, config, trace, bucketed=False, candidate_pool="level")
    if stats is not None:
        stats.append(st)
    return out


def sparsify2(G: WeightedGraph, eps: float, p: float, seed: int, *, config: SparsifyConfig | None = None,
              trace: Trace | None = None, stats: list | None = None, candidate_pool: str = "level") -> tuple[WeightedGraph, BlowUpReport]:
    """Degree-bucketed variant with random pullback; also reports blow-up.

    ``candidate_pool="level"`` pulls back to edges of the level being
    processed, which keeps each edge's expected blow-up at most 1;
    ``"all"`` allows any edge of G between the two clusters.
    """
    if candidate_pool not in ("level", "all"):
        raise ValueError(f"unknown candidate pool {candidate_pool!r}")
    out, st = _run(G, eps, p, seed, config, trace, bucketed=True, candidate_pool=candidate_pool)
    if stats is not None:
        stats.append(st)
    return out, blow_up(G, out)
