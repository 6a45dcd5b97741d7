"""Elementary collapses, the almost-collapse pipeline, cross-polytope census.

A free face has exactly one proper superface; removing the pair is an
elementary collapse.  Everything here works on faces of dimension >= d-1:
collapses below that range can never affect which faces of dimension >= d
are removable, so the search space is restricted to them.

The pipeline splits the d-skeleton into strongly connected components and
collapses each flag closure independently; the closures partition the
faces of dimension >= d and shared (d-1)-faces are maximal in all but one
closure, so the per-component step lists concatenate into one legal
global sequence.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .complexes import (Graph, SimplicialComplex, canonical_face,
                        component_closure, strongly_connected_components)

COLLAPSED_BELOW_D = "collapsed_below_d"
STUCK = "stuck"
ALMOST_COLLAPSED = "almost_collapsed"

YES = "yes"
NO = "no"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class CollapseStep:
    free_face: tuple[int, ...]
    coface: tuple[int, ...]


@dataclass(frozen=True)
class CollapseOutcome:
    steps: tuple[CollapseStep, ...]
    residual: SimplicialComplex
    status: str
    surviving_crosspolytopes: tuple[tuple[int, ...], ...] = ()
    succeeded: bool | None = None          # set by collapse_around_vertex
    stuck_component: frozenset | None = None


@dataclass(frozen=True)
class CrossPolytopeHit:
    """One embedded cross-polytope boundary, as its antipodal pair partition."""

    pairs: tuple[tuple[int, int], ...]
    induced: bool

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for p in self.pairs for v in p))


# ---------------------------------------------------------------------------
# mutable collapse state


class _CollapseState:
    """Present faces of dimension >= d-1 with live coface sets."""

    def __init__(self, x: SimplicialComplex, d: int):
        self.x = x
        self.d = d
        top = len(x.faces) - 1
        self.layers: list[set] = [set(x.faces_of_dim(k)) for k in range(max(top, d - 1) + 1)]
        self.cofaces: dict[tuple, set] = {}
        for k in range(d - 1, top + 1):
            for f in self.layers[k]:
                self.cofaces.setdefault(f, set())
                if k > d - 1:
                    for i in range(len(f)):
                        sub = f[:i] + f[i + 1:]
                        self.cofaces[sub].add(f)
        self.removed: list[CollapseStep] = []

    def clone(self) -> "_CollapseState":
        other = object.__new__(_CollapseState)
        other.x = self.x
        other.d = self.d
        other.layers = [set(s) for s in self.layers]
        other.cofaces = {f: set(s) for f, s in self.cofaces.items()}
        other.removed = list(self.removed)
        return other

    def free_pairs(self):
        for f, cf in self.cofaces.items():
            if len(cf) == 1:
                yield f, next(iter(cf))

    def has_high_faces(self) -> bool:
        return any(self.layers[k] for k in range(self.d, len(self.layers)))

    def high_face_count(self) -> int:
        return sum(len(self.layers[k]) for k in range(self.d, len(self.layers)))

    def _drop(self, f) -> None:
        k = len(f) - 1
        self.layers[k].discard(f)
        self.cofaces.pop(f, None)
        if k - 1 >= self.d - 1:
            for i in range(len(f)):
                sub = f[:i] + f[i + 1:]
                cf = self.cofaces.get(sub)
                if cf is not None:
                    cf.discard(f)

    def apply(self, free, coface) -> None:
        self._drop(coface)
        self._drop(free)
        self.removed.append(CollapseStep(free, coface))

    def residual(self) -> SimplicialComplex:
        return SimplicialComplex(self.x.n, [frozenset(s) for s in self.layers],
                                 self.x.dim_cap)

    def d_faces(self) -> frozenset:
        return frozenset(self.layers[self.d]) if self.d < len(self.layers) else frozenset()


def _policy_key(policy: str, rng):
    if policy == "lex":
        return lambda free, coface: (coface, free)
    if policy == "topdown":
        return lambda free, coface: (-len(coface), coface, free)
    if policy == "random":
        return lambda free, coface: (rng.random(), coface, free)
    raise ValueError(f"unknown collapse policy {policy!r}")


def _run_greedy(state: _CollapseState, policy: str, seed: int) -> None:
    rng = random.Random(seed)
    key = _policy_key(policy, rng)
    heap = []
    for f, cf in state.free_pairs():
        heapq.heappush(heap, (key(f, cf), f, cf))
    while heap:
        _, f, cf = heapq.heappop(heap)
        cur = state.cofaces.get(f)
        if cur is None or len(cur) != 1 or next(iter(cur)) != cf:
            continue
        state.apply(f, cf)
        for face in (cf, f):
            for i in range(len(face)):
                sub = face[:i] + face[i + 1:]
                sub_cf = state.cofaces.get(sub)
                if sub_cf is not None and len(sub_cf) == 1:
                    nxt = next(iter(sub_cf))
                    heapq.heappush(heap, (key(sub, nxt), sub, nxt))


def greedy_d_collapse(x: SimplicialComplex, d: int, policy: str = "lex",
                      seed: int = 0) -> CollapseOutcome:
    """Apply legal collapses on faces of dimension >= d-1 until none remain.

    The default policy picks the free face with lexicographically minimal
    coface; "topdown" clears the highest dimension first; "random" breaks
    ties by a seeded shuffle (the guard against dunce-hat dead ends).
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    state = _CollapseState(x, d)
    _run_greedy(state, policy, seed)
    status = STUCK if state.has_high_faces() else COLLAPSED_BELOW_D
    return CollapseOutcome(tuple(state.removed), state.residual(), status)


def replay_steps(x: SimplicialComplex, steps) -> SimplicialComplex:
    """Replay a collapse trace, checking every step is legal when applied."""
    state = _CollapseState(x, 1)
    for step in steps:
        f, cf = step.free_face, step.coface
        cur = state.cofaces.get(f)
        if cur is None:
            raise ValueError(f"free face {f} not present")
        if len(cur) != 1 or next(iter(cur)) != cf:
            raise ValueError(f"face {f} is not free with coface {cf} (cofaces: {sorted(cur)})")
        state.apply(f, cf)
    return state.residual()


# ---------------------------------------------------------------------------
# collapsing around a vertex


def collapse_around_vertex(x: SimplicialComplex, v: int, d: int) -> CollapseOutcome:
    """Lift a (d-1)-collapse of lk(v) to steps (s+v, t+v) clearing v's star.

    Succeeds when the link collapse goes through (attempted greedily with
    a few seeded retries); faces not containing v are untouched.
    """
    from .complexes import link as link_of
    if not x.has_face((v,)):
        raise ValueError(f"{v} is not a vertex of the complex")
    lk = link_of(x, (v,))
    if lk.dim < d - 1:
        return CollapseOutcome((), x, _status_of(x, d), succeeded=True)
    if d < 2:
        # a 0-collapse of the link is only possible when there is nothing to do
        return CollapseOutcome((), x, _status_of(x, d), succeeded=False)
    link_steps = None
    for policy, seed in (("lex", 0), ("topdown", 0), ("random", 1), ("random", 2),
                         ("random", 3), ("random", 4)):
        out = greedy_d_collapse(lk, d - 1, policy, seed)
        if out.status == COLLAPSED_BELOW_D:
            link_steps = out.steps
            break
    if link_steps is None:
        return CollapseOutcome((), x, _status_of(x, d), succeeded=False)
    state = _CollapseState(x, d)
    for s in link_steps:
        f = canonical_face(s.free_face + (v,))
        cf = canonical_face(s.coface + (v,))
        state.apply(f, cf)
    return CollapseOutcome(tuple(state.removed), state.residual(),
                           _status_of_state(state), succeeded=True)


def _status_of(x: SimplicialComplex, d: int) -> str:
    return STUCK if any(x.faces_of_dim(k) for k in range(d, len(x.faces))) else COLLAPSED_BELOW_D


def _status_of_state(state: _CollapseState) -> str:
    return STUCK if state.has_high_faces() else COLLAPSED_BELOW_D


# ---------------------------------------------------------------------------
# cross-polytope detection


def detect_crosspolytopes(g: Graph, d: int, induced_only: bool = False) -> list[CrossPolytopeHit]:
    """All embedded copies of the (d+1)-cross-polytope boundary graph.

    A copy is a partition of 2d+2 vertices into d+1 antipodal pairs with
    every cross-pair edge present; one hit per partition, not per
    automorphism.  `induced` marks copies whose antipodal pairs are all
    non-edges.

    For d >= 2 every edge of a copy lies in at least 2(d-1) triangles of
    the copy itself, so the search runs inside the subgraph of such edges;
    seeds are vertex pairs with at least 2d common neighbors there.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if g.n < 2 * d + 2 or g.m < 2 * d * (d + 1):
        return []
    if g.n >= 64:
        adj, seeds = _seed_pairs_sparse(g, d)
    else:
        adj, seeds = _seed_pairs_dense(g, d)
    hits = set()
    for u, w in seeds:
        pool = adj[u] & adj[w]
        pool.discard(u)
        pool.discard(w)
        first = (u, w) if u < w else (w, u)
        _extend_pairs([first], pool, d + 1, adj, hits)
    out = []
    for pairs in sorted(hits):
        induced = all(not g.has_edge(a, b) for a, b in pairs)
        if induced_only and not induced:
            continue
        out.append(CrossPolytopeHit(pairs, induced))
    return out


class _CsrSets:
    """Neighbor sets materialized lazily from a CSR adjacency matrix."""

    def __init__(self, csr):
        self._csr = csr
        self._cache: dict[int, set] = {}

    def __getitem__(self, v: int) -> set:
        s = self._cache.get(v)
        if s is None:
            lo, hi = self._csr.indptr[v], self._csr.indptr[v + 1]
            s = set(self._csr.indices[lo:hi].tolist())
            self._cache[v] = s
        return s


def _seed_pairs_sparse(g: Graph, d: int):
    from scipy import sparse
    e = np.fromiter((v for pair in g.edges for v in pair), np.int64, 2 * g.m)
    e = e.reshape(-1, 2)
    r = np.concatenate([e[:, 0], e[:, 1]])
    c = np.concatenate([e[:, 1], e[:, 0]])
    a = sparse.csr_matrix((np.ones(2 * g.m, np.int32), (r, c)), shape=(g.n, g.n))
    if d >= 2:
        tri = (a @ a).multiply(a).tocoo()
        sel = tri.data >= 2 * (d - 1)
        s = sparse.csr_matrix((np.ones(int(sel.sum()), np.int32),
                               (tri.row[sel], tri.col[sel])), shape=(g.n, g.n))
    else:
        s = a
    cd = s @ s
    rows = np.repeat(np.arange(g.n), np.diff(cd.indptr))
    mask = (cd.data >= 2 * d) & (rows < cd.indices)
    seeds = list(zip(rows[mask].tolist(), cd.indices[mask].tolist()))
    return _CsrSets(s), seeds


def _seed_pairs_dense(g: Graph, d: int):
    if d >= 2:
        adj: dict[int, set] = {v: set() for v in range(g.n)}
        for u, v in g.edges:
            if len(g.neighbor_set(u) & g.neighbor_set(v)) >= 2 * (d - 1):
                adj[u].add(v)
                adj[v].add(u)
    else:
        adj = {v: set(g.neighbor_set(v)) for v in range(g.n)}
    seeds = []
    for u in range(g.n):
        for w in range(u + 1, g.n):
            if len(adj[u] & adj[w]) >= 2 * d:
                seeds.append((u, w))
    return adj, seeds


def _extend_pairs(chosen: list, pool: set, target: int, adj: dict, hits: set) -> None:
    if len(chosen) == target:
        hits.add(tuple(sorted(chosen)))
        return
    need = target - len(chosen)
    if len(pool) < 2 * need:
        return
    # the pool minimum is either one of the copy's vertices (pair it with
    # every viable partner) or not part of the copy at all (drop it)
    x = min(pool)
    rest = pool - {x}
    for y in sorted(rest):
        new_pool = (rest - {y}) & adj[x] & adj[y]
        if len(new_pool) >= 2 * (need - 1):
            _extend_pairs(chosen + [(x, y) if x < y else (y, x)], new_pool,
                          target, adj, hits)
    _extend_pairs(chosen, rest, target, adj, hits)


# ---------------------------------------------------------------------------
# census of a residual's pure d-part


def census_crosspolytope_decomposition(d_faces: frozenset, d: int):
    """Partition check: d-faces split into whole cross-polytope boundaries.

    Returns the list of surviving copies as sorted vertex tuples, or None
    when some dual-connected block is not exactly one copy.  Blocks of the
    residual never share (d-1)-faces (faces sharing one are dual-adjacent),
    so distinct copies overlap in dimension <= d-2 and each contributes
    exactly one independent d-cycle.
    """
    if not d_faces:
        return []
    by_facet: dict[tuple, list] = {}
    for f in d_faces:
        for i in range(len(f)):
            by_facet.setdefault(f[:i] + f[i + 1:], []).append(f)
    seen = set()
    copies = []
    for start in sorted(d_faces):
        if start in seen:
            continue
        block = {start}
        stack = [start]
        seen.add(start)
        while stack:
            f = stack.pop()
            for i in range(len(f)):
                for nb in by_facet[f[:i] + f[i + 1:]]:
                    if nb not in seen:
                        seen.add(nb)
                        block.add(nb)
                        stack.append(nb)
        copy = _block_as_crosspolytope(block, d)
        if copy is None:
            return None
        copies.append(copy)
    return copies


def _block_as_crosspolytope(block: set, d: int):
    support = sorted({v for f in block for v in f})
    if len(support) != 2 * d + 2 or len(block) != 2 ** (d + 1):
        return None
    cooccur = {v: set() for v in support}
    for f in block:
        for a, b in combinations(f, 2):
            cooccur[a].add(b)
            cooccur[b].add(a)
    pairs = []
    matched = {}
    for v in support:
        anti = [w for w in support if w != v and w not in cooccur[v]]
        if len(anti) != 1:
            return None
        matched[v] = anti[0]
    for v in support:
        if matched[matched[v]] != v:
            return None
        if v < matched[v]:
            pairs.append((v, matched[v]))
    if len(pairs) != d + 1:
        return None
    return tuple(support)


# ---------------------------------------------------------------------------
# the almost-d-collapse pipeline


def almost_d_collapse(x: SimplicialComplex, d: int, seed: int = 0,
                      retries: int = 8, rescue_vertices: int = 13,
                      rescue_budget: int = 60000) -> CollapseOutcome:
    """Collapse a flag complex to a face-disjoint union of cross-polytopes.

    Strongly connected components of the d-skeleton are collapsed one at a
    time (greedy top-down, seeded random retries, collapsing around
    low-degree vertices, and an exhaustive rescue for small components).
    The concatenated step list is a single legal sequence for x.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    comps = strongly_connected_components(x, d)
    all_steps: list[CollapseStep] = []
    survivors: list[tuple[int, ...]] = []
    for ci, comp in enumerate(comps):
        closure = component_closure(x, comp)
        result = _collapse_component(closure, d, seed, ci, retries,
                                     rescue_vertices, rescue_budget)
        if result is None:
            residual = _apply_steps_unchecked(x, all_steps)
            return CollapseOutcome(tuple(all_steps), residual, STUCK,
                                   stuck_component=comp)
        steps, copies = result
        all_steps.extend(steps)
        survivors.extend(copies)
    residual = _apply_steps_unchecked(x, all_steps)
    status = ALMOST_COLLAPSED if survivors else COLLAPSED_BELOW_D
    return CollapseOutcome(tuple(all_steps), residual, status,
                           tuple(sorted(survivors)))


def _apply_steps_unchecked(x: SimplicialComplex, steps) -> SimplicialComplex:
    removed = set()
    for s in steps:
        removed.add(s.free_face)
        removed.add(s.coface)
    layers = [frozenset(f for f in layer if f not in removed) for layer in x.faces]
    return SimplicialComplex(x.n, layers, x.dim_cap)


def _component_census(state: _CollapseState, d: int):
    if any(state.layers[k] for k in range(d + 1, len(state.layers))):
        return None
    return census_crosspolytope_decomposition(state.d_faces(), d)


def _collapse_component(closure: SimplicialComplex, d: int, seed: int, ci: int,
                        retries: int, rescue_vertices: int, rescue_budget: int):
    base = _CollapseState(closure, d)
    _peel_round(base, d)      # deterministic, so it is shared by every attempt
    salt = (seed * 1000003 + ci * 8191) & 0x7FFFFFFF
    attempts = [("topdown", 0), ("lex", 0)]
    attempts += [("random", salt + k) for k in range(retries)]
    peeled_small = None
    seen_residuals: set = set()
    repeats = 0
    for policy, s in attempts:
        state = base.clone()
        _peel_and_greedy(state, d, policy, s)
        copies = _component_census(state, d)
        if copies is not None:
            return list(state.removed), copies
        if peeled_small is None:
            support = {v for f in state.d_faces() for v in f}
            if len(support) <= rescue_vertices:
                peeled_small = state
        key = frozenset(state.d_faces())
        if key in seen_residuals:
            repeats += 1
            if repeats >= 3:   # the stuck shape is stable; more retries are noise
                break
        seen_residuals.add(key)
    support = {v for f in closure.faces_of_dim(d) for v in f}
    if len(support) <= rescue_vertices:
        rescue = _exact_almost_collapse_state(_CollapseState(closure, d), d,
                                              rescue_budget)
        if rescue is not None:
            return rescue
    elif peeled_small is not None:
        rescue = _exact_almost_collapse_state(peeled_small, d, rescue_budget)
        if rescue is not None:
            return rescue
    return None


def _peel_and_greedy(state: _CollapseState, d: int, policy: str, seed: int) -> None:
    """Alternate greedy sweeps with collapsing around low-degree vertices.

    Peeling a vertex with a collapsible link clears its star and lowers
    the degrees of its neighbors, so the two phases feed each other until
    neither makes progress.
    """
    while True:
        before = state.high_face_count()
        _run_greedy(state, policy, seed)
        _peel_round(state, d)
        if state.high_face_count() == before:
            return


_PEEL_DEGREE_CAP = 16   # links above this size are left to the greedy phase


def _peel_round(state: _CollapseState, d: int) -> None:
    if d < 2:
        return
    adj: dict[int, set] = {}
    for a, b in state.layers[1] if len(state.layers) > 1 else ():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    in_d_faces: set = {v for f in state.d_faces() for v in f}
    heap = [(len(adj.get(v, ())), v) for v in sorted(in_d_faces)]
    heapq.heapify(heap)
    tried_at: dict[int, int] = {}
    while heap:
        deg, v = heapq.heappop(heap)
        cur = len(adj.get(v, ()))
        if cur != deg or deg > _PEEL_DEGREE_CAP:
            continue
        if tried_at.get(v) == deg:
            continue
        tried_at[v] = deg
        steps = _collapse_around_vertex_local(state, adj, v, d)
        if steps is None:
            continue
        touched = set()
        for f, _cf in steps:
            if len(f) == 2:
                a, b = f
                adj.get(a, set()).discard(b)
                adj.get(b, set()).discard(a)
                touched.add(a)
                touched.add(b)
        for w in touched:
            if w in adj:
                heapq.heappush(heap, (len(adj[w]), w))


def _collapse_around_vertex_local(state: _CollapseState, adj: dict, v: int, d: int):
    """Greedy link collapse at v computed from the live state; applies the
    lifted steps on success and returns them, None when the link sticks."""
    nb = sorted(adj.get(v, ()))
    if not nb:
        return None
    # the link: subsets S of N(v) with S + {v} still present
    layers: dict[int, set] = {0: set()}
    for x in nb:
        layers[0].add((x,))
    max_dim = min(len(nb), len(state.layers)) - 1
    for k in range(1, max_dim + 1):
        layer = set()
        if k + 1 >= len(state.layers):
            break
        for s in combinations(nb, k + 1):
            lifted = _insert_sorted(s, v)
            if lifted in state.layers[k + 1]:
                layer.add(s)
        if not layer:
            break
        layers[k] = layer
    top = max(layers)
    if top < d - 1:
        return None   # nothing of dimension >= d at v; peeling is moot
    lk = SimplicialComplex(state.x.n,
                           [frozenset(layers.get(k, ())) for k in range(top + 1)],
                           None)
    link_steps = None
    for policy, s in (("lex", 0), ("topdown", 0), ("random", 1), ("random", 2)):
        out = greedy_d_collapse(lk, d - 1, policy, s)
        if out.status == COLLAPSED_BELOW_D:
            link_steps = out.steps
            break
    if link_steps is None:
        return None
    applied = []
    for s in link_steps:
        f = _insert_sorted(s.free_face, v)
        cf = _insert_sorted(s.coface, v)
        state.apply(f, cf)
        applied.append((f, cf))
    return applied


def _insert_sorted(face: tuple, v: int) -> tuple:
    out = []
    placed = False
    for u in face:
        if not placed and v < u:
            out.append(v)
            placed = True
        out.append(u)
    if not placed:
        out.append(v)
    return tuple(out)


def _exact_almost_collapse_state(state: _CollapseState, d: int, budget: int):
    """Backtracking over collapse sequences to a cross-polytope residual."""
    memo: set = set()
    counter = [budget]

    def key(st: _CollapseState):
        return frozenset(frozenset(layer) for layer in st.layers[d - 1:])

    def dfs(st: _CollapseState):
        if counter[0] <= 0:
            return None
        counter[0] -= 1
        copies = _component_census(st, d)
        if copies is not None:
            return list(st.removed), copies
        k = key(st)
        if k in memo:
            return None
        moves = sorted((f, next(iter(cf))) for f, cf in st.cofaces.items() if len(cf) == 1)
        moves.sort(key=lambda m: (-len(m[1]), m[1], m[0]))
        for f, cf in moves:
            child = st.clone()
            child.apply(f, cf)
            got = dfs(child)
            if got is not None:
                return got
        memo.add(k)
        return None

    return dfs(state)


# ---------------------------------------------------------------------------
# exact d-collapsibility


def is_d_collapsible_exact(x: SimplicialComplex, d: int, budget: int = 500000) -> str:
    """Exhaustive decision of d-collapsibility with memoized backtracking.

    Greedy success is already a certificate, so the search only runs when
    every greedy attempt gets stuck; "yes"/"no" are exact, and the budget
    (in visited states) can only surface as "budget_exhausted".
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    probe = _CollapseState(x, d)
    if not probe.has_high_faces():
        return YES
    for policy, seed in (("lex", 0), ("topdown", 0), ("random", 1), ("random", 2),
                         ("random", 3), ("random", 4)):
        state = _CollapseState(x, d)
        _run_greedy(state, policy, seed)
        if not state.has_high_faces():
            return YES
    memo: set = set()
    counter = [budget]

    def key(st: _CollapseState):
        return frozenset(frozenset(layer) for layer in st.layers[d - 1:])

    def dfs(st: _CollapseState) -> str:
        if not st.has_high_faces():
            return YES
        if counter[0] <= 0:
            return BUDGET_EXHAUSTED
        counter[0] -= 1
        k = key(st)
        if k in memo:
            return NO
        moves = [(f, next(iter(cf))) for f, cf in st.cofaces.items() if len(cf) == 1]
        moves.sort(key=lambda m: (-len(m[1]), m[1], m[0]))
        exhausted = False
        for f, cf in moves:
            child = st.clone()
            child.apply(f, cf)
            got = dfs(child)
            if got == YES:
                return YES
            if got == BUDGET_EXHAUSTED:
                exhausted = True
        if exhausted:
            return BUDGET_EXHAUSTED
        memo.add(k)
        return NO

    state = _CollapseState(x, d)
    return dfs(state)


# ---------------------------------------------------------------------------
# predicates feeding the free-fundamental-group analysis


@dataclass(frozen=True)
class PredicateReport:
    """Condition-by-condition report; None means not evaluated."""

    conditions: dict
    witnesses: dict

    def holds(self, i: int):
        return self.conditions.get(i)


def check_pi1_preconditions(x: SimplicialComplex,
                            density_vertex_bound: int = 8,
                            collapse_budget: int = 200000) -> PredicateReport:
    """Testable preconditions for freeness/asphericity of a flag complex.

    (1) dimension <= 4; (2) every embedded cross-polytope copy has all its
    triangles maximal; (3) no tetrahedron meets a 4-simplex at a triangle;
    (4) 3-collapsible; (6) every subgraph on <= density_vertex_bound
    vertices has density < 25/12.  The asphericity condition (5) has no
    algorithm and is reported as not evaluated.
    """
    conditions: dict = {}
    witnesses: dict = {}
    g = x.one_skeleton()

    # (1) dimension <= 4: no materialized 5-face and no 6-clique in the graph
    high = any(x.faces_of_dim(k) for k in range(5, len(x.faces)))
    six_clique = _find_six_clique(x, g)
    conditions[1] = not high and six_clique is None
    if six_clique is not None:
        witnesses[1] = six_clique

    # (2) triangles of every embedded cross-polytope copy are maximal
    bad = None
    for hit in detect_crosspolytopes(g, 2):
        for tri in _crosspolytope_triangles(hit):
            common = g.neighbor_set(tri[0]) & g.neighbor_set(tri[1]) & g.neighbor_set(tri[2])
            if common:
                bad = (hit.pairs, tri, min(common))
                break
        if bad:
            break
    conditions[2] = bad is None
    if bad:
        witnesses[2] = bad

    # (3) no tetrahedron meeting a 4-simplex at a triangle
    bad3 = None
    for f4 in sorted(x.faces_of_dim(4)):
        inside = set(f4)
        for tri in combinations(f4, 3):
            common = g.neighbor_set(tri[0]) & g.neighbor_set(tri[1]) & g.neighbor_set(tri[2])
            if common - inside:
                bad3 = (tri, f4, min(common - inside))
                break
        if bad3:
            break
    conditions[3] = bad3 is None
    if bad3:
        witnesses[3] = bad3

    # (4) 3-collapsibility, exact fallback when greedy sticks
    verdict = is_d_collapsible_exact(x, 3, budget=collapse_budget)
    conditions[4] = True if verdict == YES else (False if verdict == NO else None)

    # (5) bounded-subcomplex asphericity: no algorithm available
    conditions[5] = None

    # (6) density of small subgraphs below 25/12
    dense = _dense_small_subgraph(g, density_vertex_bound)
    conditions[6] = dense is None
    if dense is not None:
        witnesses[6] = dense
    return PredicateReport(conditions, witnesses)


def _find_six_clique(x: SimplicialComplex, g: Graph):
    for f in sorted(x.faces_of_dim(4)):
        common = g.neighbor_set(f[0])
        for v in f[1:]:
            common = common & g.neighbor_set(v)
        common = common - set(f)
        if common:
            return tuple(sorted(f + (min(common),)))
    return None


def _crosspolytope_triangles(hit: CrossPolytopeHit):
    (a1, a2), (b1, b2), (c1, c2) = hit.pairs
    for a in (a1, a2):
        for b in (b1, b2):
            for c in (c1, c2):
                yield tuple(sorted((a, b, c)))


def _dense_small_subgraph(g: Graph, vertex_bound: int):
    """Connected vertex set of size <= bound with density >= 25/12, if any.

    A minimal witness has minimum degree 3 (vertices of degree <= 2 can be
    deleted without dropping below 25/12), so the search runs inside the
    3-core, over connected subsets only.
    """
    threshold = Fraction(25, 12)
    core = _k_core_vertices(g, 3)
    if not core:
        return None
    adj = {v: (g.neighbor_set(v) & core) for v in core}
    for start in sorted(core):
        found = _grow_dense(g, adj, (start,), {w for w in adj[start] if w > start},
                            {v for v in core if v < start}, vertex_bound, threshold)
        if found is not None:
            return found
    return None


def _grow_dense(g, adj, current, frontier, banned, bound, threshold):
    k = len(current)
    if k >= 3:
        if Fraction(g.edges_within(current), k) >= threshold:
            return tuple(sorted(current))
    if k == bound:
        return None
    for v in sorted(frontier):
        new_frontier = (frontier | adj[v]) - set(current) - banned - {v}
        got = _grow_dense(g, adj, current + (v,), new_frontier, banned | {v},
                         bound, threshold)
        if got is not None:
            return got
        banned = banned | {v}
    return None


def _k_core_vertices(g: Graph, k: int) -> set:
    alive = {v for v in range(g.n) if g.degree(v) > 0}
    deg = {v: len(g.neighbor_set(v) & alive) for v in alive}
    queue = [v for v in alive if deg[v] < k]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in g.neighbor_set(v):
            if w in alive:
                deg[w] -= 1
                if deg[w] < k:
                    queue.append(w)
    return alive


# ---------------------------------------------------------------------------
# embedded 2-spheres


def essentially_2sphere_free(x: SimplicialComplex, vmax: int = 7):
    """True iff every triangulated 2-sphere on <= vmax vertices inside the
    2-skeleton bounds a stored 3-face; otherwise (False, violating sphere).

    Spheres are enumerated by growing closed surfaces triangle by triangle
    along open edges; a closed, connected, locally-cyclic complex with
    Euler characteristic 2 is a 2-sphere.
    """
    if vmax < 4:
        raise ValueError("a triangulated 2-sphere needs at least 4 vertices")
    triangles = sorted(x.faces_of_dim(2))
    tri_set = set(triangles)
    tetra = x.faces_of_dim(3)
    by_edge: dict = {}
    for t in triangles:
        for i in range(3):
            by_edge.setdefault(t[:i] + t[i + 1:], []).append(t)

    for start_idx, start in enumerate(triangles):
        sphere = _grow_sphere(start, start_idx, triangles, by_edge, vmax, tetra)
        if sphere is not None:
            return False, tuple(sorted(sphere))
    return True, None


def _grow_sphere(start, start_idx, triangles, by_edge, vmax, tetra):
    """DFS for a violating sphere with `start` as its minimal triangle.

    Closed surfaces that are spheres bounding a stored tetrahedron are
    passed over and the search continues; only a sphere with no filling
    tetrahedron is returned.
    """
    order = {t: i for i, t in enumerate(triangles)}

    def dfs(chosen: set, edge_count: dict, verts: set):
        open_edges = [e for e, c in edge_count.items() if c == 1]
        if not open_edges:
            if _is_sphere(chosen, verts) and not _bounds_tetrahedron(chosen, tetra):
                return set(chosen)
            return None
        e = min(open_edges)
        for t in by_edge.get(e, ()):
            if t in chosen or order[t] < start_idx:
                continue
            new_verts = verts | set(t)
            if len(new_verts) > vmax:
                continue
            ok = True
            for i in range(3):
                ed = t[:i] + t[i + 1:]
                if edge_count.get(ed, 0) >= 2:
                    ok = False
                    break
            if not ok:
                continue
            for i in range(3):
                ed = t[:i] + t[i + 1:]
                edge_count[ed] = edge_count.get(ed, 0) + 1
            chosen.add(t)
            got = dfs(chosen, edge_count, new_verts)
            if got is not None:
                return got
            chosen.discard(t)
            for i in range(3):
                ed = t[:i] + t[i + 1:]
                edge_count[ed] -= 1
                if edge_count[ed] == 0:
                    del edge_count[ed]
        return None

    counts = {start[:i] + start[i + 1:]: 1 for i in range(3)}
    return dfs({start}, counts, set(start))


def _is_sphere(triangles: set, verts: set) -> bool:
    edges = set()
    star: dict = {}
    for t in triangles:
        for i in range(3):
            edges.add(t[:i] + t[i + 1:])
        for v in t:
            star.setdefault(v, []).append(t)
    if len(verts) - len(edges) + len(triangles) != 2:
        return False
    # vertex links must be single cycles
    for v, ts in star.items():
        ring_edges = [tuple(sorted(set(t) - {v})) for t in ts]
        deg: dict = {}
        for a, b in ring_edges:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        if any(c != 2 for c in deg.values()):
            return False
        # connectivity of the link
        adj: dict = {}
        for a, b in ring_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        seen = {ring_edges[0][0]}
        stack = [ring_edges[0][0]]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(deg):
            return False
    # connectivity of the surface
    return _surface_connected(triangles)


def _surface_connected(triangles: set) -> bool:
    ts = sorted(triangles)
    by_edge: dict = {}
    for t in ts:
        for i in range(3):
            by_edge.setdefault(t[:i] + t[i + 1:], []).append(t)
    seen = {ts[0]}
    stack = [ts[0]]
    while stack:
        t = stack.pop()
        for i in range(3):
            for nb in by_edge[t[:i] + t[i + 1:]]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return len(seen) == len(ts)


def _bounds_tetrahedron(sphere: set, tetra) -> bool:
    if len(sphere) != 4:
        return False
    verts = sorted({v for t in sphere for v in t})
    return len(verts) == 4 and tuple(verts) in tetra
