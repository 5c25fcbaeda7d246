"""Graph families used by the tests, demos and the ``gen`` command."""
from __future__ import annotations

import itertools

import numpy as np

from ._rng import generator
from .graph import GraphError, WeightedGraph, build_graph, sum_graphs


def _pairs(vertices) -> list[tuple[int, int, float]]:
    return [(a, b, 1.0) for a, b in itertools.combinations(vertices, 2)]


def complete(n: int) -> WeightedGraph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return build_graph(n, _pairs(range(n)))


def joined_cliques(n: int) -> WeightedGraph:
    """Two copies of K_n joined by the edge (n-1, n)."""
    if n < 2:
        raise GraphError("joined cliques need n >= 2")
    return build_graph(2 * n, _pairs(range(n)) + _pairs(range(n, 2 * n)) + [(n - 1, n, 1.0)])


dumbbell = joined_cliques


def ring_bipartite(n: int, k: int, bridge: bool = True) -> WeightedGraph:
    """n groups of k vertices in a ring, consecutive groups joined completely.

    Vertex i (1-based) of group u is u*k + i - 1.  The optional bridge joins
    the first vertex of group 0 to the first vertex of group n/2.
    """
    if n < 3 or k < 1 or (bridge and n % 2):
        raise GraphError("ring-bipartite needs n >= 3 (even with a bridge) and k >= 1")
    edges = []
    for u in range(n):
        nxt = (u + 1) % n
        edges += [(u * k + a, nxt * k + b, 1.0) for a in range(k) for b in range(k)]
    if bridge:
        edges.append((0, (n // 2) * k, 1.0))
    return build_graph(n * k, edges)


def ring_test_vector(n: int, k: int) -> np.ndarray:
    """x(u, i) = min(u, n - u), the vector separating the bridged and plain rings."""
    return np.repeat([min(u, n - u) for u in range(n)], k).astype(np.float64)


def gnp(n: int, p: float, seed: int) -> WeightedGraph:
    if n < 1 or not (0 <= p <= 1):
        raise GraphError("gnp needs n >= 1 and p in [0, 1]")
    iu, iv = np.triu_indices(n, 1)
    keep = generator(seed, "gnp").random(iu.size) < p
    return build_graph(n, u=iu[keep], v=iv[keep], w=np.ones(int(keep.sum())))


def grid(rows: int, cols: int) -> WeightedGraph:
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive dimensions")
    idx = np.arange(rows * cols).reshape(rows, cols)
    u = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    v = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return build_graph(rows * cols, u=u, v=v, w=np.ones(u.size))


def random_regular(d: int, n: int, seed: int) -> WeightedGraph:
    import networkx as nx

    if d < 0 or n < 1 or d >= n or (d * n) % 2:
        raise GraphError("random-regular needs 0 <= d < n with d*n even")
    g = nx.random_regular_graph(d, n, seed=int(seed) % 2**32)
    return build_graph(n, [(a, b, 1.0) for a, b in g.edges()])


def ring_of_cliques(c: int, k: int) -> WeightedGraph:
    """c copies of K_k in a cycle; the last vertex of clique j meets the first of clique j+1."""
    if c < 2 or k < 2:
        raise GraphError("ring of cliques needs c >= 2 and k >= 2")
    edges = []
    for j in range(c):
        edges += _pairs(range(j * k, (j + 1) * k))
        edges.append(((j + 1) * k - 1, ((j + 1) % c) * k, 1.0))
    return build_graph(c * k, edges)


def with_weights(G: WeightedGraph, seed: int, low: float = 0.0, high: float = 1.0) -> WeightedGraph:
    """Same edges with weights drawn uniformly from (low, high]."""
    w = high - (high - low) * generator(seed, "weights").random(G.m)
    return build_graph(G.n, u=G.u, v=G.v, w=w)


def multiscale(n: int, scales: list[float], p: float, seed: int) -> WeightedGraph:
    """Union of independent G(n, p) layers, layer j weighted scales[j] times a factor in (1/2, 1]."""
    layers = []
    for j, s in enumerate(scales):
        L = gnp(n, p, seed * 1000 + j)
        factor = 1.0 - 0.5 * generator(seed, "scale", j).random(L.m)
        layers.append(build_graph(n, u=L.u, v=L.v, w=s * factor))
    out = sum_graphs(n, layers)
    top = float(out.w.max(initial=1.0))
    return out.scaled(1.0 / top) if top > 1 else out


FAMILIES = ("complete", "joined-cliques", "ring-bipartite", "gnp", "grid", "random-regular", "ring-of-cliques")


def generate(family: str, params: dict, seed: int = 0) -> WeightedGraph:
    """Dispatch by family name; ``params`` holds n, k, p, d, rows, cols, bridge as needed."""
    try:
        if family == "complete":
            return complete(int(params["n"]))
        if family == "joined-cliques":
            return joined_cliques(int(params["n"]))
        if family == "ring-bipartite":
            return ring_bipartite(int(params["n"]), int(params["k"]), bool(params.get("bridge", True)))
        if family == "gnp":
            return gnp(int(params["n"]), float(params["p"]), seed)
        if family == "grid":
            return grid(int(params["rows"]), int(params["cols"]))
        if family == "random-regular":
            return random_regular(int(params["d"]), int(params["n"]), seed)
        if family == "ring-of-cliques":
            return ring_of_cliques(int(params["n"]), int(params["k"]))
    except KeyError as exc:
        raise GraphError(f"family {family!r} needs parameter {exc.args[0]!r}") from None
    raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
