"""Build flag complexes and watch them collapse.

Walks through the basic objects: graphs, clique complexes, links, the
dual graph on top-dimensional faces, and the collapse machinery, using
the octahedron (the boundary of the 3-dimensional cross-polytope) as the
running example -- it is the unique smallest flag complex that refuses to
2-collapse.
"""

import itertools

from flaglab import (almost_d_collapse, build_graph, clique_complex,
                     crosspolytope_graph, detect_crosspolytopes, dual_graph,
                     greedy_d_collapse, is_d_collapsible_exact, link,
                     replay_steps, strongly_connected_components)

# --- the octahedron: complete tripartite K_{2,2,2} ------------------------
oct_g = crosspolytope_graph(2)
oct_x = clique_complex(oct_g, 3)
print("octahedron f-vector:", oct_x.f_vector(3))
print("link of vertex 0 (a 4-cycle):", sorted(link(oct_x, (0,)).faces_of_dim(1)))

dg = dual_graph(oct_x, 2)
print(f"dual graph on triangles: {len(dg.nodes)} nodes, {len(dg.links)} links")

# greedy collapse sticks immediately: a sphere has no free faces
out = greedy_d_collapse(oct_x, 2)
print("greedy 2-collapse of the octahedron:", out.status)
print("exhaustive verdict:", is_d_collapsible_exact(oct_x, 2))

# --- a solid simplex collapses completely ----------------------------------
k6 = build_graph(6, itertools.combinations(range(6), 2))
solid = clique_complex(k6, 5)
out = greedy_d_collapse(solid, 2)
print("\nsolid 5-simplex:", out.status, f"after {len(out.steps)} steps")

# --- the pipeline: octahedron + solid simplex, disjoint ---------------------
edges = list(oct_g.edges)
edges += [(u + 6, v + 6) for u, v in itertools.combinations(range(6), 2)]
x = clique_complex(build_graph(12, edges), 5)
out = almost_d_collapse(x, 2)
print("\noctahedron + solid simplex:", out.status)
print("surviving cross-polytope copies:", out.surviving_crosspolytopes)

# replaying the trace reproduces the residual step by legal step
assert replay_steps(x, out.steps) == out.residual
print("replay validated:", len(out.steps), "steps")

# --- embedded copies in a dense graph ---------------------------------------
hits = detect_crosspolytopes(k6, 2)
print(f"\nembedded cross-polytope copies in K6: {len(hits)}"
      f" (one per perfect matching), induced: {sum(h.induced for h in hits)}")

comps = strongly_connected_components(x, 2)
print("strongly connected components of the union:", [len(c) for c in comps])
