"""Graphs, simplicial complexes, clique enumeration, links, dual graphs.

Vertices are dense integer labels 0..n-1 and never get renumbered: a vertex
that loses all its edges simply becomes isolated, so labels stay stable
across a collapse trace.  Faces are canonical sorted tuples of vertex
labels.  Complexes are immutable after construction and safe to share
between worker processes.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Neighbor sets are materialized on first use; edge membership and
    degree counts never need them, which keeps graph-only Monte Carlo
    loops cheap.
    """

    __slots__ = ("n", "edges", "_nbr")

    def __init__(self, n: int, edges: frozenset[tuple[int, int]]):
        self.n = n
        self.edges = edges
        self._nbr = None

    def _neighbor_sets(self):
        if self._nbr is None:
            nbr = [set() for _ in range(self.n)]
            for u, v in self.edges:
                nbr[u].add(v)
                nbr[v].add(u)
            self._nbr = tuple(frozenset(s) for s in nbr)
        return self._nbr

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Sorted, duplicate-free neighbors of v."""
        return tuple(sorted(self._neighbor_sets()[v]))

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._neighbor_sets()[v]

    def degree(self, v: int) -> int:
        return len(self._neighbor_sets()[v])

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def edges_within(self, vertices: Iterable[int]) -> int:
        """Number of edges of the induced subgraph on `vertices`."""
        vs = sorted(set(vertices))
        nbr = self._neighbor_sets()
        return sum(1 for u, v in combinations(vs, 2) if v in nbr[u])

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, keeping the original labels (same n)."""
        keep = set(vertices)
        es = frozenset(e for e in self.edges if e[0] in keep and e[1] in keep)
        return Graph(self.n, es)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_pairs: Iterable[tuple[int, int]]) -> Graph:
    """Canonical graph from a vertex count and a sequence of vertex pairs.

    Duplicate pairs collapse; loops and out-of-range endpoints raise.
    """
    if n < 0:
        raise ValueError("vertex count must be nonnegative")
    edges = set()
    for u, v in edge_pairs:
        if u == v:
            raise ValueError(f"loop edge ({u},{v}) not allowed")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
        edges.add((u, v) if u < v else (v, u))
    return Graph(n, frozenset(edges))


def canonical_face(vertices: Iterable[int]) -> tuple[int, ...]:
    """Canonical (strictly increasing) face representation."""
    face = tuple(sorted(vertices))
    if len(set(face)) != len(face):
        raise ValueError(f"face {face} has repeated vertices")
    return face


class SimplicialComplex:
    """Faces stratified by dimension, downward closed up to dim_cap.

    dim_cap is the maximum dimension materialized; None means unbounded.
    Random flag complexes have faces in abundance above the degree of
    interest, so a cap is the norm and every report carries it.
    """

    __slots__ = ("n", "faces", "dim_cap")

    def __init__(self, n: int, faces: Sequence[frozenset], dim_cap: int | None):
        self.n = n
        self.faces = tuple(faces)  # faces[k] = frozenset of k-dim faces
        self.dim_cap = dim_cap

    @classmethod
    def from_faces(cls, n: int, faces: Iterable[Iterable[int]],
                   dim_cap: int | None = None) -> "SimplicialComplex":
        """Downward closure of the given faces, truncated at dim_cap."""
        by_dim: dict[int, set] = {}
        stack = [canonical_face(f) for f in faces]
        seen = set()
        while stack:
            f = stack.pop()
            if f in seen or not f:
                continue
            seen.add(f)
            k = len(f) - 1
            if dim_cap is None or k <= dim_cap:
                by_dim.setdefault(k, set()).add(f)
            if k > 0:
                for i in range(len(f)):
                    sub = f[:i] + f[i + 1:]
                    if sub not in seen:
                        stack.append(sub)
        top = max(by_dim) if by_dim else -1
        return cls(n, [frozenset(by_dim.get(k, ())) for k in range(top + 1)], dim_cap)

    @property
    def dim(self) -> int:
        """Dimension of the materialized complex (-1 if empty)."""
        for k in range(len(self.faces) - 1, -1, -1):
            if self.faces[k]:
                return k
        return -1

    def faces_of_dim(self, k: int) -> frozenset:
        if 0 <= k < len(self.faces):
            return self.faces[k]
        return frozenset()

    def f_vector(self, through: int | None = None) -> tuple[int, ...]:
        """(f_0, f_1, ...) up to `through` (default: materialized top)."""
        top = len(self.faces) - 1 if through is None else through
        return tuple(len(self.faces_of_dim(k)) for k in range(top + 1))

    def has_face(self, face: Iterable[int]) -> bool:
        f = tuple(sorted(face))
        return f in self.faces_of_dim(len(f) - 1)

    def all_faces(self):
        for k in range(len(self.faces)):
            yield from self.faces[k]

    def vertices(self) -> frozenset:
        return frozenset(v for (v,) in self.faces_of_dim(0))

    def one_skeleton(self) -> Graph:
        return Graph(self.n, frozenset(self.faces_of_dim(1)))

    def validate(self) -> None:
        """Check canonical form and downward closure; raise on violation."""
        for k, layer in enumerate(self.faces):
            for f in layer:
                if len(f) != k + 1 or list(f) != sorted(set(f)):
                    raise AssertionError(f"face {f} not canonical at dim {k}")
                if any(v < 0 or v >= self.n for v in f):
                    raise AssertionError(f"face {f} outside vertex range")
                if k > 0:
                    for i in range(len(f)):
                        if f[:i] + f[i + 1:] not in self.faces[k - 1]:
                            raise AssertionError(f"missing facet of {f}")
        if self.dim_cap is not None and self.dim > self.dim_cap:
            raise AssertionError("face above dim_cap")

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex) or self.n != other.n:
            return False
        top = max(len(self.faces), len(other.faces))
        return all(self.faces_of_dim(k) == other.faces_of_dim(k) for k in range(top))

    def __hash__(self):
        return hash((self.n, tuple(self.faces)))

    def __repr__(self):
        return f"SimplicialComplex(n={self.n}, f={self.f_vector()}, dim_cap={self.dim_cap})"


def default_dim_cap(d: int) -> int:
    """Default materialization cap for degree-d studies.

    Homology in degree d needs faces through d+1; the fundamental-group
    predicates need dimension through 4 at d=2, hence d+2.
    """
    return d + 2


def clique_complex(g: Graph, dim_cap: int) -> SimplicialComplex:
    """Flag complex of g: k-faces are the (k+1)-cliques, for k <= dim_cap.

    Enumeration extends cliques along sorted adjacency in lexicographic
    order, so the output sets are reproducible across runs.
    """
    if dim_cap < 0:
        raise ValueError("dim_cap must be >= 0")
    layers: list[set] = [set((v,) for v in range(g.n))]
    # frontier holds (clique, candidate extension set with labels > max(clique))
    frontier = [((v,), g.neighbor_set(v)) for v in range(g.n)]
    for k in range(1, dim_cap + 1):
        layer = set()
        new_frontier = []
        for clique, cand in frontier:
            top = clique[-1]
            for w in sorted(cand):
                if w <= top:
                    continue
                bigger = clique + (w,)
                layer.add(bigger)
                if k < dim_cap:
                    new_frontier.append((bigger, cand & g.neighbor_set(w)))
        if not layer:
            break
        layers.append(layer)
        frontier = new_frontier
    return SimplicialComplex(g.n, [frozenset(s) for s in layers], dim_cap)


def link(x: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Link of sigma: faces tau \\ sigma over all tau containing sigma.

    The result lives on the same label set; dim_cap drops by dim(sigma)+1.
    """
    s = canonical_face(sigma)
    if not x.has_face(s):
        raise ValueError(f"{s} is not a face of the complex")
    sset = set(s)
    k0 = len(s) - 1
    layers: dict[int, set] = {}
    for k in range(k0 + 1, len(x.faces)):
        for f in x.faces[k]:
            if sset.issubset(f):
                rest = tuple(v for v in f if v not in sset)
                layers.setdefault(len(rest) - 1, set()).add(rest)
    top = max(layers) if layers else -1
    cap = None if x.dim_cap is None else x.dim_cap - len(s)
    return SimplicialComplex(x.n, [frozenset(layers.get(k, ())) for k in range(top + 1)], cap)


def flag_closure(x: SimplicialComplex, dim_cap: int) -> SimplicialComplex:
    """Flag complex on the 1-skeleton of x, truncated at dim_cap."""
    closed = clique_complex(x.one_skeleton(), dim_cap)
    # vertices of x may include isolated ones; cliques already cover them
    return closed


class DualGraph:
    """Graph on the d-faces of a complex; links join d-faces sharing a (d-1)-face."""

    __slots__ = ("d", "nodes", "links", "_adj")

    def __init__(self, d: int, nodes: tuple, links: frozenset):
        self.d = d
        self.nodes = nodes          # sorted tuple of d-faces
        self.links = links          # frozenset of (face_a, face_b), face_a < face_b
        adj: dict = {f: set() for f in nodes}
        for a, b in links:
            adj[a].add(b)
            adj[b].add(a)
        self._adj = adj

    def adjacent(self, face) -> set:
        return self._adj[face]

    def __repr__(self):
        return f"DualGraph(d={self.d}, nodes={len(self.nodes)}, links={len(self.links)})"


def dual_graph(x: SimplicialComplex, d: int) -> DualGraph:
    """Dual graph of the d-faces; empty when there are no d-faces."""
    if d < 1:
        raise ValueError("d must be >= 1")
    nodes = tuple(sorted(x.faces_of_dim(d)))
    by_facet: dict[tuple, list] = {}
    for f in nodes:
        for i in range(len(f)):
            by_facet.setdefault(f[:i] + f[i + 1:], []).append(f)
    links = set()
    for facet, fs in by_facet.items():
        if len(fs) > 1 and facet in x.faces_of_dim(d - 1):
            for a, b in combinations(sorted(fs), 2):
                links.add((a, b))
    return DualGraph(d, nodes, frozenset(links))


def strongly_connected_components(x: SimplicialComplex, d: int) -> list[frozenset]:
    """Connected components of the dual graph, ordered by minimal d-face."""
    dg = dual_graph(x, d)
    seen = set()
    comps = []
    for start in dg.nodes:  # nodes sorted, so components come out by minimal face
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            f = stack.pop()
            for g_ in dg.adjacent(f):
                if g_ not in seen:
                    seen.add(g_)
                    comp.add(g_)
                    stack.append(g_)
        comps.append(frozenset(comp))
    return comps


def component_closure(x: SimplicialComplex, component: frozenset,
                      dim_cap: int | None = None) -> SimplicialComplex:
    """Flag closure of the pure complex generated by a set of d-faces.

    The closure is the flag complex on the component's own edges (the
    1-skeleton of the faces), not on the induced subgraph of x.
    """
    edges = set()
    verts = set()
    for f in component:
        verts.update(f)
        edges.update(combinations(f, 2))
    cap = x.dim_cap if dim_cap is None else dim_cap
    if cap is None:
        cap = max(len(verts) - 1, 0)
    sub = clique_complex(Graph(x.n, frozenset(edges)), cap)
    # drop vertices that are not part of the component
    layers = [frozenset((v,) for (v,) in sub.faces_of_dim(0) if v in verts)]
    layers.extend(sub.faces[1:])
    return SimplicialComplex(x.n, layers, cap)
