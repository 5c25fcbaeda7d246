import numpy as np
import pytest

from specsparse.generators import (
    complete,
    generate,
    gnp,
    grid,
    joined_cliques,
    multiscale,
    random_regular,
    ring_bipartite,
    ring_of_cliques,
    ring_test_vector,
)
from specsparse.graph import GraphError
from specsparse.spectral import quadratic_form


def test_sizes():
    assert complete(10).m == 45
    assert joined_cliques(5).m == 21
    assert ring_bipartite(8, 4).m == 129
    assert ring_bipartite(8, 4, bridge=False).m == 128
    assert grid(3, 4).m == 17
    assert ring_of_cliques(8, 8).m == 8 * 28 + 8


def test_ring_bipartite_layout():
    G = ring_bipartite(8, 4)
    # the bridge joins the first vertex of group 0 and of group 4
    assert (0, 16) in G.weight_map()
    x = ring_test_vector(8, 4)
    assert quadratic_form(G, x) == 144.0
    assert quadratic_form(ring_bipartite(8, 4, bridge=False), x) == 128.0


def test_random_families_are_deterministic():
    assert gnp(30, 0.3, 5).edges() == gnp(30, 0.3, 5).edges()
    assert gnp(30, 0.3, 5).edges() != gnp(30, 0.3, 6).edges()
    R = random_regular(3, 20, 1)
    assert set(R.unweighted_degree.tolist()) == {3}
    M = multiscale(40, [1.0, 2.0**-40], 0.2, 1)
    assert M.w.max() <= 1.0


def test_generate_dispatch_and_errors():
    assert generate("complete", {"n": 6}).m == 15
    assert generate("ring-bipartite", {"n": 4, "k": 2, "bridge": False}).m == 16
    with pytest.raises(GraphError, match="needs parameter"):
        generate("gnp", {"n": 5})
    with pytest.raises(GraphError, match="unknown family"):
        generate("petersen", {})
    with pytest.raises(GraphError):
        ring_bipartite(7, 2)
    with pytest.raises(GraphError):
        random_regular(3, 7, 0)
    assert np.all(grid(2, 2).w == 1)
