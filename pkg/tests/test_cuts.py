import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specsparse.cuts import (
    ENUM_LIMIT,
    conductance,
    default_decomposition_phi,
    exact_sparsest_cut,
    ideal_decomp,
    max_volume_sparse_cut,
    sweep_cut,
)
from specsparse.generators import complete, joined_cliques
from specsparse.graph import DegreeContext, GraphError, build_graph, induced_subgraph
from specsparse.spectral import normalized_lambda2

from corpus import small_connected, small_graph

P4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])


def brute_force(G, B, ctx):
    """Independent oracle: iterate over subsets with Fractions only."""
    B = sorted(B)
    deg = {v: int(ctx.degrees[v]) for v in B}
    edges = [(a, b) for a, b, _ in G.edges() if a in deg and b in deg]
    best = Fraction(1)
    for k in range(1, len(B)):
        for S in itertools.combinations(B, k):
            S = set(S)
            cross = sum((a in S) != (b in S) for a, b in edges)
            vs = sum(deg[v] for v in S)
            vr = sum(deg.values()) - vs
            if min(vs, vr) > 0:
                best = min(best, Fraction(cross, min(vs, vr)))
    return best


def test_conductance_examples():
    K = complete(4)
    assert conductance(K, [0]).conductance == 1
    J = joined_cliques(5)
    c = conductance(J, range(5))
    assert c.conductance == Fraction(1, 21) and c.vol_S == 21 and c.boundary_count == 1
    assert conductance(K, []).conductance == 1
    assert conductance(K, [2], [2]).conductance == 1
    with pytest.raises(GraphError):
        conductance(K, [0, 3], [0, 1])


def test_conductance_uses_context_degrees():
    K = complete(6)
    sub = induced_subgraph(K, range(4))
    ctx = DegreeContext.of(K)
    # 4 crossing edges inside B = {0..3}, volume of both sides 10
    assert conductance(sub, [0, 1], range(4), ctx).conductance == Fraction(4, 10)


def test_sweep_cut_examples():
    dumb = joined_cliques(10)
    fiedler = np.where(np.arange(20) < 10, -1.0, 1.0)
    cut = sweep_cut(dumb, fiedler)
    assert cut.S.tolist() == list(range(10)) and cut.conductance == Fraction(1, 91)
    p = sweep_cut(P4, np.arange(4.0))
    assert p.S.tolist() == [0, 1] and p.conductance == Fraction(1, 3)
    const = sweep_cut(P4, np.zeros(4))
    assert const.S.tolist() == [0, 1]
    with pytest.raises(GraphError):
        sweep_cut(P4, np.array([0.0, np.nan, 1.0, 2.0]))


def test_exact_examples():
    p = exact_sparsest_cut(P4)
    assert p.conductance == Fraction(1, 3) and p.S.tolist() == [0, 1]
    assert exact_sparsest_cut(complete(4)).conductance == Fraction(2, 3)
    split = build_graph(4, [(0, 1), (2, 3)])
    assert exact_sparsest_cut(split).conductance == 0
    with pytest.raises(GraphError, match="limited"):
        exact_sparsest_cut(complete(ENUM_LIMIT + 1))


def test_max_volume_examples():
    assert max_volume_sparse_cut(complete(6), None, None, 0.1) is None
    side = max_volume_sparse_cut(joined_cliques(5), None, None, 1 / 21)
    assert side.S.tolist() == list(range(5))
    P = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    full = max_volume_sparse_cut(P, None, None, 1.0)
    assert 2 * full.vol_S <= 8 and full.vol_S == 4


@given(st.integers(0, 10_000))
def test_exact_matches_brute_force(i):
    G = small_graph(i, 9)
    ctx = DegreeContext.of(G)
    B = list(range(G.n))
    assert exact_sparsest_cut(G, B, ctx).conductance == brute_force(G, B, ctx)


@given(st.integers(0, 10_000), st.integers(0, 2**32 - 1))
def test_sweep_never_beats_exact(i, seed):
    G = small_connected(i)
    order = np.random.default_rng(seed).normal(size=G.n)
    cut = sweep_cut(G, order)
    assert cut.conductance >= exact_sparsest_cut(G).conductance
    assert 0 <= cut.conductance <= 1


@given(st.integers(0, 10_000))
def test_cheeger(i):
    G = small_connected(i)
    phi = float(exact_sparsest_cut(G).conductance)
    lam = normalized_lambda2(G).lambda2
    assert 2 * phi + 1e-9 >= lam >= phi**2 / 2 - 1e-9


@given(st.integers(0, 10_000), st.sampled_from([0.1, 0.2, 0.3, 0.5, 0.7, 1.0]))
def test_certificate_lemma(i, phi):
    G = small_connected(i)
    ctx = DegreeContext.of(G)
    S = max_volume_sparse_cut(G, None, ctx, phi)
    if S is None:
        return
    total = int(ctx.degrees.sum())
    alpha = Fraction(S.vol_S, total)
    if alpha > Fraction(1, 3):
        return
    rest = np.setdiff1d(np.arange(G.n), S.S)
    got = exact_sparsest_cut(G, rest, ctx).conductance
    assert float(got) >= phi * float((1 - 3 * alpha) / (1 - alpha)) - 1e-12


@given(st.integers(0, 10_000))
def test_ideal_decomposition(i):
    G = small_connected(i)
    ctx = DegreeContext.of(G)
    phi = 0.3
    parts = ideal_decomp(G, phi=phi, ctx=ctx)
    assert sorted(np.concatenate(parts).tolist()) == list(range(G.n))
    for P in parts:
        assert exact_sparsest_cut(G, P, ctx).conductance >= Fraction(phi) / 3
    # the crossing-edge budget is only promised at the default phi
    parts = ideal_decomp(G, ctx=ctx)
    assert sorted(np.concatenate(parts).tolist()) == list(range(G.n))
    label = np.empty(G.n, dtype=int)
    for k, P in enumerate(parts):
        label[P] = k
    assert 2 * np.count_nonzero(label[G.u] != label[G.v]) <= G.m


def test_default_phi():
    G = complete(5)
    assert default_decomposition_phi(G) == pytest.approx(1 / (2 * np.log(20) / np.log(4 / 3)))
