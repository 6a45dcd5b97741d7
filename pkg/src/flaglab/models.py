"""Seeded samplers for G(n,p), flag complexes, the skeleton-plus-random-faces
model, and the tabulated reference constants.

Every sampler is a pure function of (master_seed, stream): the counter-based
Philox generator is keyed by both, so samples are bit-reproducible no matter
how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .complexes import Graph, SimplicialComplex, clique_complex


@dataclass(frozen=True)
class RngSpec:
    """Master seed plus a per-trial stream index."""

    master_seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=self.master_seed,
                                     spawn_key=(self.stream,))
        return np.random.Generator(np.random.Philox(seq))


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, RngSpec):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be an RngSpec or a numpy Generator")


def _sampled_positions(total: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of successes among `total` Bernoulli(p) slots, in order.

    Geometric skips over the lexicographic slot order: fast when p is
    small, and the draw sequence (hence the sample) is identical for any
    worker layout.
    """
    if p <= 0.0 or total == 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    pos = -1
    while True:
        expect = max(64, int((total - pos) * p * 1.2) + 16)
        jumps = rng.geometric(p, size=expect).astype(np.int64)
        idx = pos + np.cumsum(jumps)
        take = idx[idx < total]
        chunks.append(take)
        if len(take) < len(idx):
            break
        pos = int(idx[-1])
    return np.concatenate(chunks)


def _decode_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map lexicographic pair ranks to (u, v), u < v."""
    u = ((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8.0 * idx)) // 2
    u = u.astype(np.int64)
    # float rounding can land a row or two off; correct exactly
    while True:
        base = u * (2 * n - u - 1) // 2
        too_high = base > idx
        too_low = idx - base >= (n - 1 - u)
        if not (too_high.any() or too_low.any()):
            break
        u[too_high] -= 1
        u[too_low & ~too_high] += 1
    v = idx - base + u + 1
    return u, v.astype(np.int64)


def sample_gnp(n: int, p: float, rng) -> Graph:
    """One draw of the binomial random graph on n labeled vertices."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    gen = _as_rng(rng)
    total = n * (n - 1) // 2
    idx = _sampled_positions(total, p, gen)
    u, v = _decode_pairs(idx, n)
    edges = frozenset(zip(u.tolist(), v.tolist()))
    return Graph(n, edges)


def sample_flag_complex(n: int, p: float, dim_cap: int, rng) -> SimplicialComplex:
    """Clique complex of a G(n,p) draw, materialized through dim_cap."""
    return clique_complex(sample_gnp(n, p, rng), dim_cap)


def _unrank_combination(idx: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    prev = -1
    remaining = idx
    for slot in range(k, 0, -1):
        v = prev + 1
        while True:
            block = comb(n - v - 1, slot - 1)
            if remaining < block:
                break
            remaining -= block
            v += 1
        out.append(v)
        prev = v
    return tuple(out)


def sample_linial_meshulam(n: int, d: int, p: float, rng) -> SimplicialComplex:
    """Complete (d-1)-skeleton plus independent d-faces with probability p.

    At d=1 the draw path is the same as sample_gnp, so identical RngSpec
    gives identical edge sets.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"face probability {p} outside [0, 1]")
    gen = _as_rng(rng)
    layers = [frozenset((v,) for v in range(n))]
    for k in range(1, d):
        layers.append(frozenset(tuple(c) for c in _all_combinations(n, k + 1)))
    total = comb(n, d + 1)
    idx = _sampled_positions(total, p, gen)
    if d == 1:
        u, v = _decode_pairs(idx, n)
        faces = frozenset(zip(u.tolist(), v.tolist()))
    else:
        faces = frozenset(_unrank_combination(int(i), n, d + 1) for i in idx)
    layers.append(faces)
    return SimplicialComplex(n, layers, d)


def _all_combinations(n: int, k: int):
    from itertools import combinations
    return combinations(range(n), k)


# ---------------------------------------------------------------------------
# reference constants


_GAMMA_TABLE = {2: 2.455, 3: 3.089, 4: 3.509, 5: 3.822}
_C_TABLE = {2: 2.754, 3: 3.907, 4: 4.962, 5: 5.984}


class ReferenceConstants:
    """Collapse/homology threshold constants for degree d.

    gamma_d and c_d are tabulated approximations (d = 2..5) of the
    transcendental-equation roots; epsilon_d = 1/(2^(2d+1) d) is the
    proven almost-collapsibility bound, and poisson_mean(c) is the
    limiting mean count of surviving cross-polytope generators at
    p = c * n^(-1/d).
    """

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.d = d

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 2 ** (2 * self.d + 1) * self.d)

    @property
    def gamma_d(self) -> float:
        if self.d not in _GAMMA_TABLE:
            raise ValueError(f"gamma_d tabulated only for d=2..5, not d={self.d}")
        return _GAMMA_TABLE[self.d]

    @property
    def c_d(self) -> float:
        if self.d not in _C_TABLE:
            raise ValueError(f"c_d tabulated only for d=2..5, not d={self.d}")
        return _C_TABLE[self.d]

    def poisson_mean(self, c: float):
        """Limit mean c^(2d(d+1)) / (2^(d+1) (d+1)!)."""
        d = self.d
        denom = 2 ** (d + 1) * factorial(d + 1)
        if isinstance(c, (int, Fraction)):
            return Fraction(c) ** (2 * d * (d + 1)) / denom
        return float(c) ** (2 * d * (d + 1)) / denom

    def finite_n_mean(self, n: int, c: float) -> float:
        """Exact expected number of embedded copies at finite n:
        (n)_(2d+2) * p^e / |Aut|, with p = c * n^(-1/d)."""
        d = self.d
        k = 2 * d + 2
        falling = 1.0
        for t in range(k):
            falling *= (n - t)
        p = float(c) * n ** (-1.0 / d)
        return falling * p ** (2 * d * (d + 1)) / crosspolytope_automorphisms(d)

    def __repr__(self):
        g = _GAMMA_TABLE.get(self.d)
        c = _C_TABLE.get(self.d)
        return (f"ReferenceConstants(d={self.d}, gamma_d={g}, c_d={c}, "
                f"epsilon={self.epsilon})")


def reference_constants(d: int) -> ReferenceConstants:
    return ReferenceConstants(d)


def crosspolytope_automorphisms(d: int) -> int:
    """|Aut| of the cross-polytope boundary graph: 2^(d+1) (d+1)!.

    The complement is a perfect matching on 2d+2 vertices: permute the
    d+1 pairs and flip each one.
    """
    return 2 ** (d + 1) * factorial(d + 1)


def crosspolytope_graph(d: int) -> Graph:
    """The complete (d+1)-partite graph with parts {2i, 2i+1}."""
    n = 2 * d + 2
    edges = set()
    for u in range(n):
        for v in range(u + 1, n):
            if u // 2 != v // 2:
                edges.add((u, v))
    return Graph(n, frozenset(edges))


def erdos_renyi_cycle_probability(c: float) -> float:
    """Limiting probability that G(n, c/n) contains a cycle, c < 1."""
    if not 0 <= c < 1:
        raise ValueError("the closed formula needs 0 <= c < 1")
    return 1.0 - np.sqrt(1.0 - c) * np.exp(c / 2.0 + c * c / 4.0)
