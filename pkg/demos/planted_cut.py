"""Find a planted sparse cut with the spectral partitioner.

A ring of eight 25-cliques has inter-clique conductance far below the
conductance inside any clique.  approx_cut should return a set of whole
cliques whose conductance is below phi.
"""
import numpy as np

from specsparse import approx_cut
from specsparse.generators import ring_of_cliques

G = ring_of_cliques(8, 25)
out = approx_cut(G, phi=0.3, p=0.01, seed=0)
cliques = sorted({int(v) // 25 for v in out.D})
print(f"graph: n={G.n} m={G.m}")
print(f"cut: |D|={out.D.size} conductance={float(out.conductance):.4f} vol fraction={out.vol_fraction:.3f}")
print(f"cliques in D: {cliques}")
whole = all(np.isin(np.arange(25 * c, 25 * c + 25), out.D).all() for c in cliques)
print(f"D is a union of whole cliques: {whole}")
