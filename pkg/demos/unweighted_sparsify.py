"""Sparsify a dense random graph and measure the spectral approximation.

sigma is the smallest s with  G/s <= H <= s*G  in the Loewner order after
the best rescaling, computed exactly from the generalized eigenvalues.
"""
import time

from specsparse import SparsifyConfig, sigma_approximation, unwted_sparsify
from specsparse.generators import gnp

G = gnp(400, 0.2, seed=7)
cfg = SparsifyConfig(epsilon=0.5, p=0.1, density_threshold_override=20, seed=0)
t = time.perf_counter()
H = unwted_sparsify(G, cfg)
elapsed = time.perf_counter() - t
rep = sigma_approximation(G, H)
print(f"input  m={G.m}")
print(f"output m={H.m} ({H.m / G.m:.1%} of the edges) in {elapsed:.1f}s")
print(f"sigma={rep.sigma:.3f}  pencil range=[{rep.pencil_min:.3f}, {rep.pencil_max:.3f}]")
