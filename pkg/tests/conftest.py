import itertools

import pytest

from flaglab import SimplicialComplex, build_graph, clique_complex
from flaglab.models import crosspolytope_graph

# the unique 6-vertex triangulation of the projective plane: 10 triangles,
# every one of the 15 edges in exactly two of them
RP2_FACES = [(0, 1, 2), (0, 1, 3), (0, 2, 4), (0, 3, 5), (0, 4, 5),
             (1, 2, 5), (1, 3, 4), (1, 4, 5), (2, 3, 4), (2, 3, 5)]


@pytest.fixture
def octahedron_graph():
    return crosspolytope_graph(2)


@pytest.fixture
def octahedron_complex(octahedron_graph):
    return clique_complex(octahedron_graph, 3)


@pytest.fixture
def rp2_complex():
    return SimplicialComplex.from_faces(6, RP2_FACES, 3)


def random_graph(rng, n, p):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mask = rng.random(len(pairs)) < p
    return build_graph(n, [pr for pr, keep in zip(pairs, mask) if keep])


def pair_partitions(vs):
    """All partitions of an even-sized list into unordered pairs."""
    if not vs:
        yield ()
        return
    a = vs[0]
    for i in range(1, len(vs)):
        rest = vs[1:i] + vs[i + 1:]
        for sub in pair_partitions(rest):
            yield ((a, vs[i]),) + sub


def brute_force_crosspolytopes(g, d):
    """Reference census: scan every (2d+2)-subset and every pairing."""
    hits = set()
    for sub in itertools.combinations(range(g.n), 2 * d + 2):
        for pairing in pair_partitions(list(sub)):
            if all(g.has_edge(a, b)
                   for p1, p2 in itertools.combinations(pairing, 2)
                   for a in p1 for b in p2):
                hits.add(tuple(sorted(pairing)))
    return sorted(hits)
