"""Essential density, strict balance, and the 25/12 collapse threshold.

Graphs with essential density below d + 1/(4+4d) have almost d-collapsible
flag closures; at d=2 the threshold is 25/12, and the cross-polytope graph
itself sits safely below it at density 2.
"""

import itertools
from fractions import Fraction

import numpy as np

from flaglab import (almost_d_collapse, build_graph, clique_complex,
                     crosspolytope_graph, density_bound_audit,
                     essential_density, is_strictly_balanced)

oct_g = crosspolytope_graph(2)
rep = essential_density(oct_g)
print("octahedron graph: rho =", rep.rho, "strictly balanced:", rep.strictly_balanced)

k4 = build_graph(4, itertools.combinations(range(4), 2))
print("K4: rho =", essential_density(k4).rho)

# a pendant vertex dilutes the whole-graph density but not the essential one
edges = list(oct_g.edges) + [(0, 6)]
rep = essential_density(build_graph(7, edges))
print("octahedron + pendant: rho =", rep.rho, "witness =", rep.witness)

print("\nstrict balance of cross-polytope graphs:")
for d in (1, 2, 3):
    print(f"  d={d}:", is_strictly_balanced(crosspolytope_graph(d)),
          "(density", essential_density(crosspolytope_graph(d)).rho, ")")

print("\nthreshold for d=2:", 2 + Fraction(1, 12))
print("octahedron below threshold:", density_bound_audit(oct_g, 2))
dense = build_graph(6, set(itertools.combinations(range(5), 2)) | {(0, 5), (1, 5), (2, 5)})
print("13 edges on 6 vertices below threshold:", density_bound_audit(dense, 2))

# --- every sparse-enough connected graph almost collapses --------------------
rng = np.random.default_rng(3)
print("\nrandom connected graphs below 25/12 -> pipeline outcome:")
shown = 0
while shown < 5:
    n = int(rng.integers(6, 14))
    pairs = list(itertools.combinations(range(n), 2))
    idx = rng.permutation(len(pairs))[:int(rng.integers(n, 2 * n + 1))]
    g = build_graph(n, [pairs[i] for i in idx])
    if not density_bound_audit(g, 2):
        continue
    out = almost_d_collapse(clique_complex(g, 4), 2)
    print(f"  n={n} m={g.m}: {out.status}"
          f" ({len(out.surviving_crosspolytopes)} copies survive)")
    shown += 1
