import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specsparse._rng import child_seed
from specsparse.generators import complete, gnp, joined_cliques, multiscale
from specsparse.graph import GraphError, build_graph, is_edge_subset, sum_graphs
from specsparse.spectral import sigma_approximation
from specsparse.trace import Trace
from specsparse.unweighted import SparsifyConfig, unwted_sparsify
from specsparse.weighted import (
    ClusterMap,
    bit_levels,
    blow_up,
    bounded_sparsify,
    contract,
    greedy_subdivide,
    level_gap,
    pullback,
    sparsify,
    sparsify2,
    truncate_weights,
)

from corpus import weighted_graph


def two_scale(k=10, light=2.0**-40, seed=0):
    """Two heavy K_k joined by a random light overlay."""
    heavy = joined_cliques(k)
    heavy = build_graph(2 * k, [(a, b, 1.0) for a, b, _ in heavy.edges() if (a < k) == (b < k)])
    rng = np.random.default_rng(seed)
    pairs = {(int(a), int(k + b)) for a, b in rng.integers(0, k, size=(3 * k, 2))}
    overlay = build_graph(2 * k, [(a, b, light) for a, b in pairs])
    return sum_graphs(2 * k, [heavy, overlay])


# ---------------------------------------------------------------- integral weights

def test_bit_levels():
    G = build_graph(2, [(0, 1, 5.0)])
    assert [i for i, _ in bit_levels(G)] == [0, 2]
    with pytest.raises(GraphError):
        bit_levels(build_graph(2, [(0, 1, 1.5)]))
    rng = np.random.default_rng(1)
    H = gnp(30, 0.4, 2)
    H = build_graph(30, u=H.u, v=H.v, w=rng.integers(1, 8, H.m).astype(float))
    rebuilt = sum_graphs(30, [g for _, g in bit_levels(H)], [2.0**i for i, _ in bit_levels(H)])
    assert rebuilt.edges() == H.edges()


def test_bounded_with_unit_weights_matches_unweighted():
    G = gnp(80, 0.4, 5)
    cfg = SparsifyConfig(0.3, 0.1, density_threshold_override=5)
    a = bounded_sparsify(G, 0.3, 0.1, 9, config=cfg)
    b = unwted_sparsify(G, SparsifyConfig(0.3, 0.1, density_threshold_override=5, seed=child_seed(9, "bit", 0)))
    assert a.edges() == b.edges()
    assert is_edge_subset(a, G)


# ---------------------------------------------------------------- truncation

def test_truncation_examples():
    dec = truncate_weights(build_graph(3, [(0, 1, 1.0), (1, 2, 0.3)]), 0.5)
    assert dec.Q == 12
    assert dec.r.tolist() == [4, 6] and dec.q.tolist() == [16, 19]
    assert dec.z.tolist() == [1.0, 0.296875]
    with pytest.raises(GraphError, match="scale first"):
        truncate_weights(build_graph(2, [(0, 1, 1.5)]), 0.3)
    with pytest.raises(GraphError):
        truncate_weights(build_graph(2, [(0, 1, 0.5)]), 1.5)


@given(st.integers(0, 100_000), st.sampled_from([0.49, 0.2, 0.05]))
def test_truncation_sandwich_and_levels(i, eps):
    G = weighted_graph(i)
    dec = truncate_weights(G, eps)
    Q = dec.Q
    recon = [Fraction(0)] * G.m
    for lvl, idx in dec.levels:
        for e in idx.tolist():
            recon[e] += Fraction(1, 2**lvl) if lvl >= 0 else Fraction(2 ** (-lvl))
    for e in range(G.m):
        z, w = dec.z_fraction(e), Fraction(float(G.w[e]))
        assert Q <= dec.q[e] < 2 * Q
        assert z <= w <= (1 + Fraction(1, Q)) * z
        assert recon[e] == z
        assert float(z) == dec.z[e]
    assert dec.multiplicity().max(initial=0) <= dec.max_levels_per_edge


# ---------------------------------------------------------------- contraction and pullback

def test_contract_examples():
    G = build_graph(4, [(0, 2, 1.0), (1, 2, 2.0), (0, 1, 3.0)])
    pi = ClusterMap.from_parts(4, [[0, 1], [2, 3]])
    assert contract(G, pi).edges() == [(0, 1, 3.0)]
    single = ClusterMap.from_parts(4, [[v] for v in range(4)])
    assert contract(G, single).edges() == G.edges()
    assert contract(G, ClusterMap.from_parts(4, [range(4)])).m == 0
    with pytest.raises(GraphError):
        contract(G, ClusterMap.from_parts(4, [[0, 1]]))
    with pytest.raises(GraphError):
        ClusterMap.from_parts(4, [[0, 1], [1, 2]])


def test_pullback_first_and_missing():
    G = build_graph(4, [(0, 2, 1.0), (1, 3, 2.0), (1, 2, 1.0)])
    pi = ClusterMap.from_parts(4, [[0, 1], [2, 3]])
    H = contract(G, pi)
    back = pullback(H, pi, G.u, G.v, "first")
    assert back.edges() == [(0, 2, 4.0)]
    with pytest.raises(GraphError, match="no candidate"):
        pullback(H, pi, G.u[:0], G.v[:0])
    with pytest.raises(ValueError):
        pullback(H, pi, G.u, G.v, "best")


@given(st.integers(0, 100_000), st.integers(1, 8), st.sampled_from(["first", "random"]))
def test_round_trip(i, k, strategy):
    G = weighted_graph(i)
    rng = np.random.default_rng(i)
    pi = ClusterMap(rng.integers(0, k, G.n), k)
    H = contract(G, pi)
    back = pullback(H, pi, G.u, G.v, strategy, seed=i)
    assert is_edge_subset(back, G)
    again = contract(back, pi)
    assert again.edges() == H.edges()
    assert np.array_equal(again.w, H.w)


def test_random_pullback_frequency():
    G = build_graph(6, [(0, 3), (1, 4), (2, 5)])
    pi = ClusterMap.from_parts(6, [[0, 1, 2], [3, 4, 5]])
    H = contract(G, pi)
    runs = 10_000
    hits = np.zeros(6)
    for s in range(runs):
        hits[pullback(H, pi, G.u, G.v, "random", seed=s).u[0]] += 1
    sd = math.sqrt(runs * (1 / 3) * (2 / 3))
    assert np.all(np.abs(hits[:3] - runs / 3) <= 3 * sd)


# ---------------------------------------------------------------- subdivision and blow-up

def test_greedy_subdivide_examples():
    # five vertices, each with two edges leaving the cluster: boundary 10 = 5 * 2^1
    eu = np.repeat(np.arange(5), 2)
    ev = np.arange(5, 15)
    deg = np.bincount(eu, minlength=15) + np.bincount(ev, minlength=15)
    parts = greedy_subdivide(range(5), eu, ev, 1, deg)
    assert [p.tolist() for p in parts] == [[0, 1], [2, 3, 4]]
    for P in parts:
        b = int((np.isin(eu, P) ^ np.isin(ev, P)).sum())
        assert 2 <= b <= 8
    small = greedy_subdivide([0, 1], eu, ev, 1, deg)
    assert [p.tolist() for p in small] == [[0, 1]]
    with pytest.raises(GraphError):
        greedy_subdivide(range(5), eu, ev, 0, deg)


def test_blow_up_examples():
    P = build_graph(3, [(0, 1), (1, 2)])
    same = blow_up(P, P)
    assert same.edge.tolist() == [1.0, 1.0] and same.vertex.tolist() == [1.0, 1.0, 1.0]
    none = blow_up(P, build_graph(3, []))
    assert none.max_vertex == 0.0
    one = blow_up(P, build_graph(3, [(0, 1, 4.0)]))
    assert one.vertex[1] == 2.0 and one.vertex[0] == 4.0
    with pytest.raises(GraphError):
        blow_up(P, build_graph(3, [(0, 2)]))


# ---------------------------------------------------------------- full pipelines

def test_level_gap():
    assert level_gap(20, 0.3) == math.ceil(math.log2(2 * 20**3 * 8000))
    assert level_gap(20, 0.3) == 27


def test_equal_weights_is_one_bounded_level():
    G = gnp(60, 0.5, 3)
    cfg = SparsifyConfig(0.3, 0.1, density_threshold_override=6)
    stats: list = []
    out = sparsify(G, 0.3, 0.1, 4, config=cfg, stats=stats)
    (st_,) = stats
    assert len(st_.levels) == 1 and st_.levels[0].clusters == 60 - int(np.count_nonzero(G.unweighted_degree == 0))
    ref = bounded_sparsify(G, 0.05, st_.budget, child_seed(4, "level", 0), config=cfg)
    assert out.edges() == ref.edges()


def test_two_scale_contraction():
    G = two_scale()
    stats: list = []
    T = Trace()
    out = sparsify(G, 0.3, 0.1, 0, config=SparsifyConfig(0.3, 0.1, density_threshold_override=4), stats=stats, trace=T)
    (st_,) = stats
    light_levels = [r for r in st_.levels if r.level >= st_.l]
    assert light_levels and all(r.clusters <= 2 for r in light_levels)
    assert st_.total_clusters <= 2 * G.n * st_.l
    assert T.counters["sum_k"] == st_.total_clusters
    assert is_edge_subset(out, G)
    # the 2^-20 overlay sits within l levels of the heavy edges: no contraction
    near = two_scale(light=2.0**-20)
    stats = []
    sparsify(near, 0.3, 0.1, 0, config=SparsifyConfig(0.3, 0.1, density_threshold_override=4), stats=stats)
    light = [r for r in stats[0].levels if r.level >= 20]
    assert light and all(r.clusters > 2 for r in light)


def test_range_checks():
    G = complete(10)
    with pytest.raises(GraphError):
        sparsify(G, 0.05, 0.1, 0)
    with pytest.raises(GraphError):
        sparsify(G, 0.3, 0.6, 0)
    with pytest.raises(ValueError):
        sparsify2(G, 0.3, 0.1, 0, candidate_pool="nearby")


@settings(max_examples=25)
@given(st.integers(0, 100_000))
def test_sparsify_subset_and_counter(i):
    G = weighted_graph(i, 40)
    eps = 0.3 if G.n > 4 else None
    if eps is None:
        return
    stats: list = []
    cfg = SparsifyConfig(eps, 0.1, density_threshold_override=3)
    out = sparsify(G, eps, 0.1, i, config=cfg, stats=stats)
    assert is_edge_subset(out, G)
    assert stats[0].total_clusters <= 2 * G.n * stats[0].l
    out2, rep = sparsify2(G, eps, 0.1, i, config=cfg)
    assert is_edge_subset(out2, G) and rep.edge.shape == (G.m,)


def test_sparsify_quality_on_two_scale():
    # density 8 keeps each K15 whole, so only the contracted overlay is approximated
    G = two_scale(k=15)
    out = sparsify(G, 0.3, 0.1, 1, config=SparsifyConfig(0.3, 0.1, density_threshold_override=8))
    c, Q = 6 / 0.3, 20
    assert out.m < G.m
    assert sigma_approximation(G, out).sigma <= 1.3 * (1 + 1 / c) ** 2 * (1 + 1 / Q)


def test_sparsify2_parts_within_bounds():
    G = multiscale(60, [1.0, 2.0**-40], 0.3, 2)
    T = Trace()
    stats: list = []
    _, rep = sparsify2(G, 0.3, 0.1, 3, config=SparsifyConfig(0.3, 0.1, density_threshold_override=6), stats=stats, trace=T)
    assert T.counters["sum_t"] >= T.counters["sum_k"] == stats[0].total_clusters
    assert stats[0].total_parts == T.counters["sum_t"]
    assert np.all(rep.vertex >= 0) and rep.vertex.shape == (G.n,)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_sparsify_calc_algebra(i):
    rng = np.random.default_rng(i)
    base = gnp(10, 0.6, i)
    if base.m == 0:
        return
    Ghat = build_graph(10, u=base.u, v=base.v, w=rng.uniform(0.5, 2.0, base.m))
    Gt = build_graph(10, u=Ghat.u, v=Ghat.v, w=Ghat.w * rng.uniform(0.8, 1.25, Ghat.m))
    beta = float(rng.uniform(0.01, 0.49))
    lhs = sum_graphs(10, [Gt, Ghat], [1.0, beta])
    gamma = sigma_approximation(lhs, Ghat.scaled(1 + beta)).sigma - 1
    if gamma >= 0.5:
        return
    assert sigma_approximation(Gt, Ghat).sigma <= (1 + beta) * (1 + gamma) * (1 + 1e-9)
