"""Exact ground truth for small instances.

Everything here is exponential in the instance size and guarded accordingly.
Matchings are handled internally as integer bitmasks over edge indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy import sparse

from . import guards
from .hypergraph import Hypergraph, Matching


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def to_mask(members) -> int:
    m = 0
    for i in members:
        m |= 1 << i
    return m


def count_matchings(H: Hypergraph, max_edges: int | None = guards.MAX_EDGES_COUNT) -> int:
    """Exact number of matchings of H, the empty matching included.

    Branches on the lowest surviving edge e: matchings avoiding e, plus
    matchings containing e (which avoid every edge meeting e). Results are
    memoized on the surviving edge set.
    """
    guards.check("max-edges", H.m, max_edges)
    conflicts = H.conflicts
    memo: dict[int, int] = {0: 1}

    def count(alive: int) -> int:
        got = memo.get(alive)
        if got is not None:
            return got
        low = alive & -alive
        e = low.bit_length() - 1
        rest = alive ^ low
        val = count(rest) + count(rest & ~conflicts[e])
        memo[alive] = val
        return val

    return count((1 << H.m) - 1)


def _enumerate_masks(H: Hypergraph) -> list[int]:
    conflicts = H.conflicts
    out: list[int] = []

    def extend(current: int, allowed: int, start: int):
        out.append(current)
        for e in range(start, H.m):
            if allowed >> e & 1:
                extend(current | 1 << e, allowed & ~conflicts[e], e + 1)

    extend(0, (1 << H.m) - 1, 0)
    out.sort(key=lambda s: (s.bit_count(), bits(s)))
    return out


def enumerate_matchings(H: Hypergraph, max_omega: int | None = guards.MAX_OMEGA_ENUMERATE) -> list[Matching]:
    """All matchings, ordered by size and then lexicographically."""
    guards.check("max-omega", count_matchings(H, None), max_omega)
    return [Matching(H, frozenset(bits(s))) for s in _enumerate_masks(H)]


@dataclass(frozen=True)
class TransitionGraph:
    """The transition structure of the lazy matching chain on H.

    Every off-diagonal transition has probability 1/(2m); ``neighbors[i]``
    lists the states reachable from state i in one non-trivial move.
    """

    host: Hypergraph
    states: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def m(self) -> int:
        return self.host.m

    @cached_property
    def index(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(self.states)}

    def matching(self, i: int) -> Matching:
        return Matching(self.host, frozenset(bits(self.states[i])))

    def state_index(self, M) -> int:
        key = M if isinstance(M, int) else to_mask(M.members if isinstance(M, Matching) else M)
        return self.index[key]

    @property
    def p_move(self) -> Fraction:
        return Fraction(1, 2 * self.m) if self.m else Fraction(0)

    def probability(self, i: int, j: int) -> Fraction:
        if i == j:
            return 1 - len(self.neighbors[i]) * self.p_move
        return self.p_move if j in self._neighbor_sets[i] else Fraction(0)

    @cached_property
    def _neighbor_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(n) for n in self.neighbors)

    def exact_row(self, i: int) -> dict[int, Fraction]:
        row = {j: self.p_move for j in self.neighbors[i]}
        row[i] = self.probability(i, i)
        return row

    def matrix(self) -> sparse.csr_matrix:
        """Floating-point mirror of the transition matrix."""
        N = self.size
        rows, cols, vals = [], [], []
        p = 1.0 / (2 * self.m) if self.m else 0.0
        for i, nb in enumerate(self.neighbors):
            rows.append(i)
            cols.append(i)
            vals.append(1.0 - len(nb) * p)
            for j in nb:
                rows.append(i)
                cols.append(j)
                vals.append(p)
        return sparse.csr_matrix((vals, (rows, cols)), shape=(N, N))

    def dense(self) -> np.ndarray:
        return self.matrix().toarray()

    def transition_count(self) -> int:
        """Number of ordered pairs (M, M') with M != M' and p > 0."""
        return sum(len(n) for n in self.neighbors)


def move_target(H: Hypergraph, state: int, h: int) -> int:
    """State reached from ``state`` when edge h is proposed (lazy coin passed)."""
    if state >> h & 1:
        return state & ~(1 << h)
    hit = state & H.conflicts[h]
    if hit & (hit - 1):
        return state
    return (state & ~hit) | 1 << h


def build_transition_graph(H: Hypergraph, max_omega: int | None = guards.MAX_OMEGA_TRANSITIONS) -> TransitionGraph:
    guards.check("max-omega", count_matchings(H, None), max_omega)
    states = _enumerate_masks(H)
    index = {s: i for i, s in enumerate(states)}
    neighbors = []
    for s in states:
        nb = set()
        for h in range(H.m):
            t = move_target(H, s, h)
            if t != s:
                nb.add(index[t])
        neighbors.append(tuple(sorted(nb)))
    return TransitionGraph(H, tuple(states), tuple(neighbors))


def distribution_after(T: TransitionGraph, t: int, start: int = 0) -> np.ndarray:
    """Exact (floating) state distribution after t steps from state ``start``."""
    if t < 0:
        raise ValueError("t must be >= 0")
    P = T.matrix().T.tocsr()
    p = np.zeros(T.size)
    p[start] = 1.0
    for _ in range(t):
        p = P @ p
    return p


def tv_curve(T: TransitionGraph, t_max: int, start: int = 0) -> np.ndarray:
    """Distance to uniform after 0..t_max steps, in one pass."""
    P = T.matrix().T.tocsr()
    u = 1.0 / T.size
    p = np.zeros(T.size)
    p[start] = 1.0
    out = np.empty(t_max + 1)
    out[0] = 0.5 * np.abs(p - u).sum()
    for t in range(1, t_max + 1):
        p = P @ p
        out[t] = 0.5 * np.abs(p - u).sum()
    return out


def tv_distance(p: Sequence[float], q: Sequence[float]) -> float:
    if len(p) != len(q):
        raise ValueError(f"length mismatch: {len(p)} vs {len(q)}")
    for name, v in (("p", p), ("q", q)):
        total = math.fsum(v)
        if abs(total - 1) > 1e-12:
            raise ValueError(f"{name} sums to {total!r}, not 1")
    return 0.5 * math.fsum(abs(a - b) for a, b in zip(p, q))
