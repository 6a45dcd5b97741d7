"""Essential density, strict balance, and face-degree diagnostics.

Density comparisons are exact rationals throughout: the thresholds in play
(25/12 at d=2) sit right next to densities small graphs actually achieve,
and floating point would misclassify them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .complexes import Graph, SimplicialComplex


@dataclass(frozen=True)
class DensityReport:
    rho: Fraction
    witness: tuple[int, ...]
    strictly_balanced: bool


@dataclass(frozen=True)
class CBoundedReport:
    d: int
    c: Fraction
    maxima: dict          # i -> (max degree of an (i-1)-face, bound c^i n^(1-i/d))
    passed: bool


class _Dinic:
    """Max flow with exact integer (arbitrary precision) capacities."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for e in self.head[u]:
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    e = self.head[u][it[u]]
                    v = self.to[e]
                    if self.cap[e] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[e]))
                        if got:
                            self.cap[e] -= got
                            self.cap[e ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 62)
                if not pushed:
                    break
                flow += pushed

    def min_cut_source_side(self, s: int) -> set[int]:
        side = {s}
        queue = [s]
        for u in queue:
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and v not in side:
                    side.add(v)
                    queue.append(v)
        return side


def _denser_subgraph(g: Graph, target: Fraction) -> tuple[int, ...] | None:
    """Vertex set of a subgraph with density strictly above target, if any.

    Goldberg's construction: with guess g = a/b the min cut equals
    n*m*b + 2*min_S(a*|S| - b*e(S)), so a cut below n*m*b certifies a
    witness on the source side.
    """
    verts = sorted({v for e in g.edges for v in e})
    if not verts:
        return None
    m = g.m
    a, b = target.numerator, target.denominator
    idx = {v: i + 1 for i, v in enumerate(verts)}
    nv = len(verts)
    net = _Dinic(nv + 2)
    s, t = 0, nv + 1
    for u, v in g.edges:
        net.add_edge(idx[u], idx[v], b)
        net.add_edge(idx[v], idx[u], b)
    for v in verts:
        net.add_edge(s, idx[v], m * b)
        net.add_edge(idx[v], t, m * b + 2 * a - b * g.degree(v))
    flow = net.max_flow(s, t)
    if flow >= nv * m * b:
        return None
    side = net.min_cut_source_side(s)
    witness = tuple(v for v in verts if idx[v] in side)
    assert witness and Fraction(g.edges_within(witness), len(witness)) > target
    return witness


def essential_density(g: Graph) -> DensityReport:
    """Exact max of e(H')/v(H') over nonempty subgraphs, with witness.

    Dinkelbach-style iteration on the flow test: each round either proves
    no denser subgraph exists or jumps to the exact density of a witness,
    so the search walks up the finite candidate set e/v directly.
    """
    if g.n == 0:
        raise ValueError("empty graph has no density")
    if g.m == 0:
        return DensityReport(Fraction(0), (0,), g.n == 1)
    verts = sorted({v for e in g.edges for v in e})
    rho = Fraction(g.edges_within(verts), len(verts))
    witness = tuple(verts)
    while True:
        better = _denser_subgraph(g, rho)
        if better is None:
            break
        rho = Fraction(g.edges_within(better), len(better))
        witness = better
    balanced = _is_strictly_balanced_given(g, rho)
    return DensityReport(rho, witness, balanced)


def _is_strictly_balanced_given(g: Graph, rho: Fraction) -> bool:
    support = sorted({v for e in g.edges for v in e})
    extra = g.n - len(support)
    if extra > 0 and g.m > 0:
        return False  # isolated vertices mean the graph itself dips below rho
    if g.m == 0:
        return g.n == 1
    if Fraction(g.m, g.n) != rho:
        return False
    # every proper subgraph attaining rho lives inside g minus some vertex
    for v in support:
        rest = [u for u in support if u != v]
        if not rest:
            continue
        if essential_density_of_subset(g, rest) >= rho:
            return False
    return True


def essential_density_of_subset(g: Graph, vertices) -> Fraction:
    """Essential density of the induced subgraph on `vertices`."""
    sub = g.induced_subgraph(vertices)
    if sub.m == 0:
        return Fraction(0)
    support = sorted({v for e in sub.edges for v in e})
    rho = Fraction(sub.edges_within(support), len(support))
    while True:
        better = _denser_subgraph(sub, rho)
        if better is None:
            return rho
        rho = Fraction(sub.edges_within(better), len(better))


def is_strictly_balanced(g: Graph) -> bool:
    """True iff the density e/v is attained by g and by no proper subgraph."""
    if g.m == 0:
        return g.n == 1
    return essential_density(g).strictly_balanced


def brute_force_density(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Reference oracle: maximize e/v over all nonempty vertex subsets."""
    support = sorted({v for e in g.edges for v in e})
    if not support:
        if g.n == 0:
            raise ValueError("empty graph has no density")
        return Fraction(0), (0,)
    best = Fraction(0)
    best_set = (support[0],)
    for k in range(2, len(support) + 1):
        for sub in combinations(support, k):
            dens = Fraction(g.edges_within(sub), k)
            if dens > best:
                best, best_set = dens, sub
    return best, best_set


def c_bounded_check(x: SimplicialComplex, d: int, c) -> CBoundedReport:
    """Face-degree diagnostics: (i-1)-faces vs the bound c^i n^(1-i/d).

    The comparison max^d <= c^(i*d) * n^(d-i) is carried out in exact
    integer arithmetic.
    """
    c = Fraction(c)
    n = x.n
    maxima = {}
    passed = True
    for i in range(1, d):
        by_face: dict = {}
        for f in x.faces_of_dim(i):
            for t in range(len(f)):
                sub = f[:t] + f[t + 1:]
                by_face[sub] = by_face.get(sub, 0) + 1
        mx = max(by_face.values()) if by_face else 0
        bound_num = c.numerator ** (i * d) * n ** (d - i)
        bound_den = c.denominator ** (i * d)
        ok = mx ** d * bound_den <= bound_num
        bound_float = float(c) ** i * n ** (1 - i / d)
        maxima[i] = (mx, bound_float)
        passed = passed and ok
    return CBoundedReport(d, c, maxima, passed)


def density_bound_audit(g: Graph, d: int) -> bool:
    """Exact check of rho(g) < d + 1/(4+4d), the almost-collapse threshold."""
    if g.m == 0:
        return True
    threshold = d + Fraction(1, 4 + 4 * d)
    return essential_density(g).rho < threshold
