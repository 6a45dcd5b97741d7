import itertools

import numpy as np
import pytest

from flaglab import (SimplicialComplex, build_graph, clique_complex,
                     component_closure, dual_graph, flag_closure, link,
                     strongly_connected_components)
from conftest import random_graph


def complete_graph(n):
    return build_graph(n, itertools.combinations(range(n), 2))


class TestBuildGraph:
    def test_path(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        assert g.m == 2
        assert g.neighbors(1) == (0, 2)

    def test_complete(self):
        assert complete_graph(6).m == 15

    def test_loop_rejected(self):
        with pytest.raises(ValueError):
            build_graph(2, [(0, 0)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            build_graph(2, [(0, 5)])

    def test_duplicates_collapse(self):
        g = build_graph(3, [(0, 1), (1, 0), (0, 1)])
        assert g.m == 1


class TestCliqueComplex:
    def test_k4_full(self):
        x = clique_complex(complete_graph(4), 3)
        assert x.f_vector() == (4, 6, 4, 1)

    def test_octahedron_has_no_tetrahedra(self, octahedron_graph):
        x = clique_complex(octahedron_graph, 3)
        assert x.f_vector(3) == (6, 12, 8, 0)

    def test_c4(self):
        x = clique_complex(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), 2)
        assert x.f_vector(2) == (4, 4, 0)

    def test_cap_is_prefix_of_deeper_cap(self):
        rng = np.random.default_rng(10)
        for _ in range(25):
            g = random_graph(rng, int(rng.integers(5, 12)), float(rng.uniform(0.3, 0.8)))
            deep = clique_complex(g, 5)
            for j in range(3):
                shallow = clique_complex(g, j)
                for k in range(j + 1):
                    assert shallow.faces_of_dim(k) == deep.faces_of_dim(k)

    def test_validates(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            g = random_graph(rng, 9, 0.5)
            clique_complex(g, 4).validate()


class TestLink:
    def test_vertex_link_in_k4_is_solid_triangle(self):
        x = clique_complex(complete_graph(4), 3)
        lk = link(x, (0,))
        assert lk.f_vector() == (3, 3, 1)

    def test_vertex_link_in_octahedron_is_4_cycle(self, octahedron_complex):
        lk = link(octahedron_complex, (0,))
        assert lk.f_vector() == (4, 4)
        # the 4-cycle: each link vertex has exactly two link neighbors
        g = lk.one_skeleton()
        for (v,) in lk.faces_of_dim(0):
            assert len(g.neighbor_set(v)) == 2

    def test_link_of_maximal_face_is_empty(self):
        x = clique_complex(complete_graph(4), 3)
        lk = link(x, (0, 1, 2, 3))
        assert lk.dim == -1

    def test_not_a_face_raises(self, octahedron_complex):
        with pytest.raises(ValueError):
            link(octahedron_complex, (0, 1))   # 0,1 antipodal: not an edge

    def test_vertex_link_is_flag_complex_of_neighborhood(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            g = random_graph(rng, 10, 0.5)
            x = clique_complex(g, 4)
            v = int(rng.integers(0, 10))
            lk = link(x, (v,))
            nbh = g.induced_subgraph(g.neighbors(v))
            expected = clique_complex(nbh, 3)
            for k in range(4):
                exp = {f for f in expected.faces_of_dim(k)
                       if all(u in g.neighbor_set(v) for u in f)}
                assert lk.faces_of_dim(k) == exp


class TestFlagClosure:
    def test_hollow_tetrahedron_fills(self):
        x = SimplicialComplex.from_faces(4, itertools.combinations(range(4), 3), 3)
        closed = flag_closure(x, 3)
        assert closed.f_vector() == (4, 6, 4, 1)

    def test_idempotent_and_monotone(self):
        rng = np.random.default_rng(13)
        for _ in range(15):
            g = random_graph(rng, 9, 0.4)
            x = clique_complex(g, 4)
            again = flag_closure(x, 4)
            assert again == x
            # monotone: closure of any subcomplex of x sits inside x
            partial = SimplicialComplex(x.n, x.faces[:2], 1)
            closed = flag_closure(partial, 4)
            for k in range(len(x.faces)):
                assert closed.faces_of_dim(k) >= partial.faces_of_dim(k)

    def test_c4_unchanged(self):
        x = clique_complex(build_graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)]), 2)
        assert flag_closure(x, 2) == x


class TestDualGraph:
    def test_octahedron(self, octahedron_complex):
        dg = dual_graph(octahedron_complex, 2)
        assert len(dg.nodes) == 8
        assert len(dg.links) == 12     # each of the 12 edges lies in 2 triangles
        comps = strongly_connected_components(octahedron_complex, 2)
        assert len(comps) == 1

    def test_single_triangle(self):
        x = SimplicialComplex.from_faces(3, [(0, 1, 2)], 2)
        dg = dual_graph(x, 2)
        assert len(dg.nodes) == 1 and len(dg.links) == 0

    def test_two_triangles_sharing_edge(self):
        x = SimplicialComplex.from_faces(4, [(0, 1, 2), (1, 2, 3)], 2)
        dg = dual_graph(x, 2)
        assert len(dg.nodes) == 2 and len(dg.links) == 1


class TestComponents:
    def test_two_disjoint_octahedra(self, octahedron_graph):
        shift = {v: v + 6 for v in range(6)}
        edges = list(octahedron_graph.edges)
        edges += [(shift[u], shift[v]) for u, v in octahedron_graph.edges]
        x = clique_complex(build_graph(12, edges), 3)
        comps = strongly_connected_components(x, 2)
        assert [len(c) for c in comps] == [8, 8]

    def test_k5_single_component(self):
        x = clique_complex(complete_graph(5), 4)
        comps = strongly_connected_components(x, 2)
        assert len(comps) == 1
        assert len(comps[0]) == 10

    def test_no_d_faces(self):
        x = clique_complex(build_graph(4, [(0, 1)]), 3)
        assert strongly_connected_components(x, 2) == []

    def test_partition_of_d_faces(self):
        rng = np.random.default_rng(14)
        for _ in range(20):
            g = random_graph(rng, 12, 0.4)
            x = clique_complex(g, 3)
            comps = strongly_connected_components(x, 2)
            union = set()
            for c in comps:
                assert not (union & c)
                union |= c
            assert union == set(x.faces_of_dim(2))

    def test_closure_intersections_stay_low_dimensional(self):
        # closures of distinct components share dimension <= d-1, and a
        # shared (d-1)-face is maximal in at least one of the closures
        # (at d=2 a shared edge would merge the components, so only shared
        # vertices can actually occur; d=3 exercises the maximality branch)
        rng = np.random.default_rng(15)
        pairs_checked = 0
        for _ in range(40):
            g = random_graph(rng, 13, 0.35)
            for d in (2, 3):
                x = clique_complex(g, d + 1)
                comps = strongly_connected_components(x, d)
                if len(comps) < 2:
                    continue
                closures = [component_closure(x, c) for c in comps]
                for a, b in itertools.combinations(range(len(closures)), 2):
                    xa, xb = closures[a], closures[b]
                    pairs_checked += 1
                    shared_dim = -1
                    for k in range(min(len(xa.faces), len(xb.faces))):
                        both = xa.faces_of_dim(k) & xb.faces_of_dim(k)
                        if both:
                            shared_dim = k
                        if k == d - 1:
                            for f in both:
                                in_a = any(set(f) < set(t) for t in xa.faces_of_dim(d))
                                in_b = any(set(f) < set(t) for t in xb.faces_of_dim(d))
                                assert not (in_a and in_b)
                    assert shared_dim <= d - 1
        assert pairs_checked >= 10
