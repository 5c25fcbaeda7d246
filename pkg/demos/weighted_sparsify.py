"""Sparsify a graph whose weights span six orders of magnitude.

Weights are split into bit levels.  Heavy components are contracted
before the light levels are sparsified, and sparse edges are pulled back
to real edges of the input.  sparsify2 also reports the blow-up: how many
contracted edges each original vertex ends up carrying.

Every bit level is sparsified on its own, so the savings only show once
single levels are dense; moderate graphs shrink by about a quarter.
"""
from specsparse import SparsifyConfig, sigma_approximation, sparsify, sparsify2
from specsparse.generators import multiscale
from specsparse.graph import is_edge_subset

G = multiscale(150, [1.0, 1e-6], p=0.8, seed=3)
cfg = SparsifyConfig(epsilon=0.3, p=0.1, density_threshold_override=10)
print(f"input  n={G.n} m={G.m} weight range [{G.w.min():.2e}, {G.w.max():.2e}]")

stats = []
H = sparsify(G, eps=0.3, p=0.1, seed=1, config=cfg, stats=stats)
print(f"sparsify:  m={H.m} sigma={sigma_approximation(G, H).sigma:.3f} "
      f"levels={stats[0].l} clusters={stats[0].total_clusters} subset={is_edge_subset(H, G)}")

H2, blow = sparsify2(G, eps=0.3, p=0.1, seed=1, config=cfg)
print(f"sparsify2: m={H2.m} sigma={sigma_approximation(G, H2).sigma:.3f} max vertex blow-up={blow.max_vertex:.3f}")
