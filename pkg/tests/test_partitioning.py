import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specsparse.cuts import conductance
from specsparse.generators import complete, joined_cliques, ring_of_cliques
from specsparse.graph import DegreeContext
from specsparse.partitioning import ContractConstants, approx_cut, partition, partition2
from specsparse.trace import Trace

from corpus import fuzz_graph


def test_partition_examples():
    assert partition(complete(20), None, None, 0.05, 0.1, 0).empty
    out = partition(joined_cliques(10), None, None, 0.1, 0.1, 0)
    assert sorted(out.D.tolist()) in (list(range(10)), list(range(10, 20)))
    assert out.conductance == Fraction(1, 91)
    assert not partition(complete(7), None, None, 1.0 - 1e-9, 0.1, 0).empty


def test_partition2_examples():
    T = Trace()
    out = partition2(complete(12), None, None, 0.05, 0.1, 0.01, 0, trace=T)
    # an empty inner cut leaves W unchanged, so the loop runs all r = ceil(log2(1/eps)) rounds
    assert out.empty and out.rounds_used == 7 and len(T.of("partition")) == 7
    dumb = joined_cliques(10)
    out = partition2(dumb, None, None, 0.9, 0.1, 0.25, 3)
    assert out.D.size == 10
    assert conductance(dumb, out.D).conductance <= Fraction(9, 10)
    T = Trace()
    partition2(dumb, None, None, 0.9, 0.1, 0.5, 3, trace=T)
    assert len(T.of("partition")) == 1


def test_approx_cut_examples():
    assert approx_cut(complete(30), 0.05, 0.1, 0).empty
    big = joined_cliques(50)
    out = approx_cut(big, 0.1, 0.1, 2)
    assert out.D.size == 50 and out.conductance == Fraction(1, 2451)
    assert 25 * out.vol_D <= 23 * out.vol_V


def test_ring_of_cliques_recovery():
    G = ring_of_cliques(8, 8)
    hits = sum(29 * approx_cut(G, 0.95, 0.1, s).vol_D >= approx_cut(G, 0.95, 0.1, s).vol_V for s in range(50))
    assert hits >= 40


def test_driver_loop_fidelity():
    G = ring_of_cliques(8, 8)
    T = Trace()
    phi, p = 0.95, 0.1
    out = approx_cut(G, phi, p, 7, trace=T)
    (ac,) = T.of("approx_cut")
    r = math.ceil(math.log2(G.m))
    eps = min(1 / (2 * r), 1 / 5)
    assert ac[1:] == (phi, p, r, eps, 2 * G.m)
    calls = T.of("partition2")
    assert 1 <= len(calls) == out.rounds_used <= r
    r2 = math.ceil(math.log2(1 / eps))
    for c in calls:
        assert c[1] == pytest.approx(2 * phi / 23) and c[2] == pytest.approx(p / (2 * r)) and c[3] == eps and c[4] == r2
    for c in T.of("partition"):
        assert c[1] == pytest.approx(2 * phi / 23 / 9) and c[2] == pytest.approx(p / (2 * r) / r2)
    # each inner call sees a shrinking remainder whose volume still passed the 4/5 test
    for c in calls:
        assert 5 * c[5] >= 4 * 2 * G.m


def test_contract_constants():
    c = ContractConstants(2.0, 3.0)
    assert c.f1(0.5, 16) == pytest.approx(2.0 * 0.25 / 64)
    assert c.f2(0.5, 16) == pytest.approx(3.0 * 0.25 / 256)
    assert c.f2(0.5, 1) == pytest.approx(0.75)


@given(st.integers(0, 2**63 - 1))
def test_determinism(seed):
    G = fuzz_graph(seed % 300, 64)
    a = approx_cut(G, 0.5, 0.1, seed)
    b = approx_cut(G, 0.5, 0.1, seed)
    assert np.array_equal(a.D, b.D)


@given(st.integers(0, 100_000), st.sampled_from([0.05, 0.2, 0.5, 0.9]))
def test_contracts_hold(i, phi):
    G = fuzz_graph(i, 96)
    ctx = DegreeContext.of(G)
    cache: dict = {}
    vol = 2 * G.m
    P = partition(G, None, ctx, phi, 0.1, i, cache=cache)
    assert 8 * P.vol_D <= 7 * vol
    assert P.empty or conductance(G, P.D, None, ctx).conductance <= Fraction(phi)
    Q = partition2(G, None, ctx, phi, 0.1, 0.2, i, cache=cache)
    assert 10 * Q.vol_D <= 9 * vol
    assert Q.empty or conductance(G, Q.D, None, ctx).conductance <= Fraction(phi)
    A = approx_cut(G, phi, 0.1, i, cache=cache)
    assert 25 * A.vol_D <= 23 * vol
    assert A.empty or conductance(G, A.D, None, ctx).conductance <= Fraction(phi)


def test_subset_partition_uses_context():
    G = joined_cliques(10)
    ctx = DegreeContext.of(G)
    B = np.arange(12)
    out = partition(G, B, ctx, 0.5, 0.1, 0)
    assert out.vol_V == int(ctx.degrees[B].sum())
    assert set(out.D.tolist()) <= set(B.tolist())
