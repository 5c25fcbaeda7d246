"""PartitionAndSample and UnwtedSparsify for weight-1 graphs.

The graph is cut into pieces of high conductance with ``approx_cut``, each
piece is sampled, and the edges running between pieces are sparsified
recursively.  Vertex ids stay global throughout the recursion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._rng import child_seed
from .graph import DegreeContext, GraphError, WeightedGraph, _from_canonical, edge_subgraph, empty_graph, induced_subgraph, sum_graphs, vertex_set
from .partitioning import ContractConstants, approx_cut
from .sampling import SampleParams, sample_subgraph, upsilon_for_target
from .trace import Trace

LOG_29_28 = math.log2(29.0 / 28.0)


class ContractViolation(RuntimeError):
    """An invariant the algorithm guarantees by construction did not hold."""


@dataclass(frozen=True)
class SparsifyConfig:
    """Parameters shared by the sparsifiers.

    In ``practical`` mode ``density_threshold_override`` is the target number
    of edges per non-isolated vertex: graphs at or below it are returned
    as-is, and pieces are sampled so their expected size meets it.
    """

    epsilon: float
    p: float
    mode: str = "practical"
    density_threshold_override: float | None = None
    phi_override: float | None = None
    seed: int = 0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 1.0
    c8: float = 1.0

    def __post_init__(self):
        if self.mode not in ("paper", "practical"):
            raise ValueError(f"unknown mode {self.mode!r}")
        top = 0.5 if self.mode == "paper" else 1.0
        if not (0 < self.epsilon < top):
            raise ValueError(f"epsilon must lie in (0, {top:g}) in {self.mode} mode")
        if not (0 < self.p < 0.5):
            raise ValueError("p must lie in (0, 1/2)")
        if self.density_threshold_override is not None and not self.density_threshold_override > 0:
            raise ValueError("density threshold must be positive")
        if self.phi_override is not None and not (0 < self.phi_override < 1):
            raise ValueError("phi_override must lie in (0, 1)")

    @property
    def constants(self) -> ContractConstants:
        return ContractConstants(self.c1, self.c2)

    def density(self, n: int) -> float:
        if self.density_threshold_override is not None:
            return float(self.density_threshold_override)
        return float(math.ceil(math.log2(max(n, 2)) / self.epsilon**2))

    def with_seed(self, seed: int) -> "SparsifyConfig":
        return replace(self, seed=int(seed))


@dataclass
class PieceList:
    pieces: list = field(default_factory=list)  # (vertex set, sampled graph)
    boundary: WeightedGraph | None = None
    sizes: list = field(default_factory=list)  # edges in each piece before sampling

    def vertex_sets(self) -> list[np.ndarray]:
        return [V for V, _ in self.pieces]

    def sampled_sum(self, n: int) -> WeightedGraph:
        return sum_graphs(n, [H for _, H in self.pieces])


def _check_unweighted(G: WeightedGraph) -> None:
    if G.m and not G.is_unweighted():
        raise GraphError("expected a graph with all weights equal to 1")


def partition_and_sample(G: WeightedGraph, phi: float, eps_hat: float, p_hat: float, seed: int, *, vertices=None,
                         constants: ContractConstants | None = None, density: float | None = None,
                         trace: Trace | None = None) -> PieceList:
    """Recursively cut G into pieces with ``approx_cut`` and sample each piece.

    With ``density`` set, each piece is sampled at the Upsilon whose expected
    edge count is ``density`` per vertex of the piece; otherwise Upsilon comes
    from the literal formula with lambda = f2(phi)^2 / 2.
    """
    _check_unweighted(G)
    constants = ContractConstants() if constants is None else constants
    root = np.arange(G.n) if vertices is None else vertex_set(vertices, G.n)
    out = PieceList()

    def sample_piece(S: np.ndarray, Gc: WeightedGraph, ctx: DegreeContext, lam: float, s: int) -> None:
        F = induced_subgraph(Gc, S)
        if density is None:
            params = SampleParams(min(eps_hat, 0.49), p_hat, min(lam, 2.0))
        else:
            touched = np.unique(np.concatenate([F.u, F.v])).size
            ups = upsilon_for_target(ctx, F.u, F.v, density * touched) if F.m else 2.0
            params = SampleParams(eps_hat, p_hat, lam, mode="practical", upsilon_override=ups)
        res = sample_subgraph(S, F, ctx, params, s)
        out.pieces.append((S, res.graph))
        out.sizes.append(F.m)
        if trace is not None:
            trace.count("sample")
            trace.log("sample", int(S.size), F.m, res.kept_edges, res.upsilon_used)

    def rec(V: np.ndarray, s: int, depth: int) -> None:
        Gc = induced_subgraph(G, V)
        if trace is not None:
            trace.high("partition_and_sample_depth", depth)
        lam = constants.f2(phi, Gc.m) ** 2 / 2.0
        if Gc.m == 0:
            out.pieces.append((V, empty_graph(G.n)))
            out.sizes.append(0)
            return
        ctx = DegreeContext.of(Gc)
        D = approx_cut(Gc, phi, p_hat, child_seed(s, "cut"), V, ctx, trace=trace).D
        if D.size == 0:
            sample_piece(V, Gc, ctx, lam, child_seed(s, "sample"))
            return
        rest = np.setdiff1d(V, D)
        vol_D = int(ctx.degrees[D].sum())
        if 29 * vol_D <= 2 * Gc.m:
            sample_piece(rest, Gc, ctx, lam, child_seed(s, "sample"))
            rec(D, child_seed(s, "D"), depth + 1)
        else:
            rec(rest, child_seed(s, "rest"), depth + 1)
            rec(D, child_seed(s, "D"), depth + 1)

    rec(root, int(seed), 0)
    label = np.full(G.n, -1, dtype=np.int64)
    for k, (V, _) in enumerate(out.pieces):
        label[V] = k
    inroot = label >= 0
    cross = inroot[G.u] & inroot[G.v] & (label[G.u] != label[G.v])
    out.boundary = edge_subgraph(G, cross)
    return out


def unwted_sparsify(G: WeightedGraph, cfg: SparsifyConfig, *, trace: Trace | None = None, _depth: int = 0) -> WeightedGraph:
    """Sparsify a weight-1 graph; the result uses only edges of G."""
    _check_unweighted(G)
    if trace is not None:
        trace.count("unwted_sparsify")
        trace.high("unwted_depth", _depth + 1)
    if G.m == 0:
        return G
    n = int(np.count_nonzero(G.unweighted_degree))
    vol = 2 * G.m
    eps, p = cfg.epsilon, cfg.p
    if cfg.mode == "paper":
        small = vol <= cfg.c3 * n * math.log2(n / p) ** 30 / eps**2
    else:
        small = G.m <= cfg.density(n) * n
    if small:
        return G
    phi = cfg.phi_override if cfg.phi_override is not None else 1.0 / (2.0 * math.log2(vol) / LOG_29_28)
    p_hat = p / (6.0 * n * math.log2(n))
    eps_hat = eps * math.log(2) ** 2 / ((1.0 + 2.0 * math.log2(n) / LOG_29_28) * (2.0 * math.log2(n)))
    density = None if cfg.mode == "paper" else cfg.density(n)
    pieces = partition_and_sample(G, phi, eps_hat, p_hat, child_seed(cfg.seed, "pas"), constants=cfg.constants,
                                  density=density, trace=trace)
    G0 = pieces.boundary
    if trace is not None:
        trace.log("ps_boundary", G.m, G0.m)
    if 2 * G0.m > G.m:
        raise ContractViolation(f"boundary has {G0.m} of {G.m} edges, more than half")
    rest = unwted_sparsify(G0, cfg.with_seed(child_seed(cfg.seed, "boundary")), trace=trace, _depth=_depth + 1)
    return sum_graphs(G.n, [H for _, H in pieces.pieces] + [rest])
