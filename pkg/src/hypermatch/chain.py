"""The lazy matching chain MC(H) and its mixing-time calculators.

One step from matching M: with probability 1/2 stay put (Lazy). Otherwise
draw an edge h uniformly and

* remove h if h is in M (Remove),
* add h if it meets no edge of M (Add),
* add h and drop the single edge of M it meets (Swap),
* do nothing if h meets two or more edges of M (Null).

Seeding
-------
Every sampling entry point takes an explicit integer seed. ``make_rng(seed,
*key)`` builds a PCG64 generator from ``SeedSequence(seed, spawn_key=key)``;
distinct keys give statistically independent streams, and the same
``(seed, key)`` always gives the same stream. Child streams of a generator
are obtained with ``spawn``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import guards
from .exact import TransitionGraph, bits, to_mask
from .hypergraph import Hypergraph, HypergraphError, Matching

LAZY, NULL, REMOVE, ADD, SWAP = 0, 1, 2, 3, 4
KIND_NAMES = ("Lazy", "Null", "Remove", "Add", "Swap")

_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, *key: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed) & _SEED_MASK, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class StepOutcome:
    next: Matching
    kind: str
    chosen_edge: int | None = None


@dataclass(frozen=True)
class ChainParams:
    steps: int
    seed: int = 0
    record_trace: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


def _step_mask(H: Hypergraph, state: int, rng: np.random.Generator) -> tuple[int, int, int | None]:
    if rng.random() < 0.5:
        return state, LAZY, None
    if H.m == 0:
        return state, NULL, None
    h = int(rng.integers(H.m))
    if state >> h & 1:
        return state & ~(1 << h), REMOVE, h
    hit = state & H.conflicts[h]
    if hit == 0:
        return state | 1 << h, ADD, h
    if hit & (hit - 1) == 0:
        return (state & ~hit) | 1 << h, SWAP, h
    return state, NULL, h


def step(M: Matching, rng: np.random.Generator) -> StepOutcome:
    """One transition of MC(H) from M. The lazy coin is flipped first."""
    state, kind, h = _step_mask(M.host, to_mask(M.members), rng)
    nxt = M if kind in (LAZY, NULL) else Matching(M.host, frozenset(bits(state)))
    return StepOutcome(nxt, KIND_NAMES[kind], h)


def run(H: Hypergraph, params: ChainParams) -> tuple[Matching, list[tuple[int, str, int | None]] | None]:
    """Run ``params.steps`` steps from the empty matching.

    Returns the final matching and, if requested, the trace as
    ``(step number, kind, chosen edge)`` tuples.
    """
    rng = make_rng(params.seed)
    state = 0
    trace = [] if params.record_trace else None
    for t in range(1, params.steps + 1):
        state, kind, h = _step_mask(H, state, rng)
        if trace is not None:
            trace.append((t, KIND_NAMES[kind], h))
    return Matching(H, frozenset(bits(state))), trace


# -- vectorized engine -----------------------------------------------------


class BatchChain:
    """Many independent copies of MC(H) advanced together with numpy.

    States are rows of 64-bit words holding edge-index bitmasks. Each step
    draws one integer r in [0, 2m) per chain: r >= m is the lazy half,
    otherwise h = r is the proposed edge. This is the same kernel as
    ``step``, but the streams differ, so the two engines are not
    trace-compatible.
    """

    def __init__(self, H: Hypergraph):
        self.H = H
        self.m = H.m
        self.words = max(1, (H.m + 63) // 64)
        conf = np.zeros((H.m, self.words), dtype=np.uint64)
        own = np.zeros((H.m, self.words), dtype=np.uint64)
        for i, c in enumerate(H.conflicts):
            for w in range(self.words):
                conf[i, w] = (c >> (64 * w)) & _SEED_MASK
            own[i, i // 64] = np.uint64(1) << np.uint64(i % 64)
        self.conf = conf
        self.own = own

    def empty(self, chains: int) -> np.ndarray:
        return np.zeros((chains, self.words), dtype=np.uint64)

    def from_masks(self, masks) -> np.ndarray:
        out = self.empty(len(masks))
        for r, s in enumerate(masks):
            for w in range(self.words):
                out[r, w] = (s >> (64 * w)) & _SEED_MASK
        return out

    def to_masks(self, states: np.ndarray) -> list[int]:
        out = []
        for row in states:
            s = 0
            for w in range(self.words - 1, -1, -1):
                s = (s << 64) | int(row[w])
            out.append(s)
        return out

    def step(self, states: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Advance every row once; returns (new states, kinds, proposed edges)."""
        C = states.shape[0]
        kinds = np.full(C, LAZY, dtype=np.int8)
        if self.m == 0:
            return states, kinds, np.full(C, -1)
        r = rng.integers(0, 2 * self.m, size=C)
        active = r < self.m
        h = np.where(active, r, -1)
        rows = np.nonzero(active)[0]
        ha = h[rows]
        cur = states[rows]
        own = self.own[ha]
        in_m = (cur & own).any(axis=1)
        hit = cur & self.conf[ha]
        pop = np.bitwise_count(hit).sum(axis=1)
        new = states.copy()
        rem = in_m
        add = ~in_m & (pop <= 1)
        new[rows[rem]] = cur[rem] & ~own[rem]
        new[rows[add]] = (cur[add] & ~self.conf[ha[add]]) | own[add]
        k = np.full(rows.size, NULL, dtype=np.int8)
        k[rem] = REMOVE
        k[add & (pop == 0)] = ADD
        k[add & (pop == 1)] = SWAP
        kinds[rows] = k
        return new, kinds, h

    def advance(self, states: np.ndarray, steps: int, rng: np.random.Generator) -> np.ndarray:
        if self.words == 1 and self.m:
            # one word per chain: run on a flat vector, same draws as ``step``
            flat = states[:, 0].copy()
            own, conf = self.own[:, 0], self.conf[:, 0]
            two_m = 2 * self.m
            for _ in range(steps):
                r = rng.integers(0, two_m, size=flat.size)
                active = r < self.m
                h = np.where(active, r, 0)
                o, c = own[h], conf[h]
                in_m = (flat & o) != 0
                hit = flat & c
                swap_ok = (hit & (hit - np.uint64(1))) == 0
                flat = np.where(
                    active & in_m,
                    flat & ~o,
                    np.where(active & swap_ok, (flat & ~c) | o, flat),
                )
            return flat.reshape(-1, 1)
        for _ in range(steps):
            states = self.step(states, rng)[0]
        return states

    def contains(self, states: np.ndarray, e: int) -> np.ndarray:
        return (states[:, e // 64] >> np.uint64(e % 64)) & np.uint64(1) == 1


def sample_matchings(H: Hypergraph, chains: int, steps: int, seed: int, *key: int) -> list[Matching]:
    """Final states of ``chains`` independent runs of ``steps`` steps from the empty matching."""
    eng = BatchChain(H)
    states = eng.advance(eng.empty(chains), steps, make_rng(seed, *key))
    return [Matching(H, frozenset(bits(s))) for s in eng.to_masks(states)]


# -- analytic bounds -------------------------------------------------------


def p_min(H: Hypergraph) -> Fraction:
    if H.m == 0:
        raise HypergraphError("p_min is undefined for a hypergraph without edges")
    return Fraction(1, 2 * H.m)


@dataclass(frozen=True)
class Conductance:
    phi: Fraction
    cut_set: tuple[int, ...]
    cut_edges: int
    omega: int

    def to_dict(self) -> dict:
        return {
            "phi": float(self.phi),
            "phi_exact": str(self.phi),
            "cut_set": list(self.cut_set),
            "cut_edges": self.cut_edges,
            "omega": self.omega,
        }


def cut_table(T: TransitionGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every state subset S with 0 < |S| <= |Omega|/2: (bitmask of S, |S|, |cut(S)|).

    |cut(S)| counts ordered transitions from S to its complement.
    """
    N = T.size
    masks = np.arange(1 << N, dtype=np.int64)
    sizes = np.bitwise_count(masks)
    keep = (sizes > 0) & (2 * sizes <= N)
    masks = masks[keep]
    sizes = sizes[keep].astype(np.int64)
    cuts = np.zeros(masks.size, dtype=np.int64)
    for i, nb in enumerate(T.neighbors):
        adj = np.int64(to_mask(nb))
        inside = (masks >> i) & 1
        cuts += inside * np.bitwise_count(adj & ~masks)
    return masks, sizes, cuts


def conductance_exact(T: TransitionGraph, max_omega: int | None = guards.MAX_OMEGA_CONDUCTANCE) -> Conductance:
    """Exact conductance by enumerating every admissible subset S.

    Ties are broken by the lexicographically smallest sorted tuple of state
    indices.
    """
    N = T.size
    guards.check("max-omega", N, max_omega)
    if N < 2:
        raise ValueError("conductance needs at least two states")
    masks, sizes, cuts = cut_table(T)
    ratio = cuts / sizes
    best = ratio.min()
    cands = np.nonzero(ratio <= best + 1e-12)[0]
    exact = {int(c): Fraction(int(cuts[c]), int(sizes[c])) for c in cands}
    low = min(exact.values())
    winners = [tuple(bits(int(masks[c]))) for c, v in exact.items() if v == low]
    S = min(winners)
    c = next(c for c, v in exact.items() if v == low and tuple(bits(int(masks[c]))) == S)
    return Conductance(low * T.p_move, S, int(cuts[c]), N)


def tv_bound(phi: float, omega: int, t: int) -> float:
    """Upper bound |Omega|^2 (1 - phi^2/2)^t on the distance to uniform after t steps."""
    _check_phi(phi, omega)
    if t < 0:
        raise ValueError("t must be >= 0")
    phi = float(phi)
    return omega**2 * (1 - phi * phi / 2) ** t


def mixing_bound(phi: float, omega: int, eps: float) -> int:
    """Steps sufficient for distance <= eps: ceil(2/phi^2 (2 ln|Omega| + ln(1/eps)))."""
    _check_phi(phi, omega)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    # exact rational arithmetic: phi can be far below float range once squared
    phi = Fraction(phi)
    return math.ceil(2 / phi**2 * Fraction(2 * math.log(omega) + math.log(1 / eps)))


def _check_phi(phi, omega) -> None:
    if not 0 < phi <= 1:
        raise ValueError(f"phi must lie in (0, 1], got {phi}")
    if omega < 2:
        raise ValueError(f"omega must be >= 2, got {omega}")
