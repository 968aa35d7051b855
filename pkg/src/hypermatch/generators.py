"""Instance families: comb-free constructions, hardness reductions, random corpora."""

from __future__ import annotations

import math
import warnings
from itertools import combinations

from .chain import make_rng, run, ChainParams
from .hypergraph import Graph, Hypergraph, HypergraphError, Matching


def subdivide(H3: Hypergraph, with_original: bool = False) -> Hypergraph:
    """Subdivided 3-graph: each triple {a, b, c} becomes {a,b,x}, {a,c,x}, {b,c,x}
    for a fresh vertex x = n + 1 + (edge index).

    ``with_original=True`` also keeps {a, b, c} itself. That variant can
    contain 3-combs and breaks the correspondence with shadow-graph matchings;
    it is kept for exploration only.
    """
    if H3.k != 3:
        raise HypergraphError(f"subdivide needs a 3-graph, got k={H3.k}")
    edges = []
    for i, (a, b, c) in enumerate(H3.edges):
        x = H3.n + 1 + i
        edges += [(a, b, x), (a, c, x), (b, c, x)]
        if with_original:
            edges.append((a, b, c))
    return Hypergraph(H3.n + H3.m, 3, tuple(edges))


def shadow_graph(H3: Hypergraph) -> Graph:
    """Replace each hyperedge by a triangle (for linear inputs the triangles are edge-disjoint)."""
    pairs = {p for e in H3.edges for p in combinations(e, 2)}
    return Graph(H3.n, tuple(sorted(pairs)))


def rooted_blowup(sizes: list[int], k: int, strict: bool = False) -> Hypergraph:
    """Parts V_1..V_p of the given sizes on consecutive labels, root = first vertex
    of each part; for every pair i < j add all k-subsets of V_i u V_j containing
    both roots.

    Pairs with |V_i u V_j| < k contribute nothing; with ``strict`` an instance
    without any edge is an error.
    """
    if k < 2:
        raise HypergraphError("k must be >= 2")
    if any(s < 1 for s in sizes):
        raise HypergraphError("part sizes must be >= 1")
    parts = []
    start = 1
    for s in sizes:
        parts.append(list(range(start, start + s)))
        start += s
    edges = []
    for i, j in combinations(range(len(parts)), 2):
        ri, rj = parts[i][0], parts[j][0]
        rest = parts[i][1:] + parts[j][1:]
        for extra in combinations(rest, k - 2):
            edges.append((ri, rj) + extra)
    if strict and not edges:
        raise HypergraphError(f"no pair of parts has k={k} vertices")
    return Hypergraph(start - 1, k, tuple(edges))


def from_bipartite(G: Graph, k: int) -> Hypergraph:
    """Stretch every edge (u, v) of G into (v, x_1, ..., x_{k-2}, u) with fresh x's."""
    if k < 2:
        raise HypergraphError("k must be >= 2")
    if not G.is_bipartite():
        warnings.warn("input graph is not bipartite", stacklevel=2)
    if max(G.degrees(), default=0) > 4:
        warnings.warn("input graph has a vertex of degree > 4", stacklevel=2)
    edges = []
    nxt = G.n + 1
    for u, v in G.edges:
        fresh = tuple(range(nxt, nxt + k - 2))
        nxt += k - 2
        edges.append((u, v) + fresh)
    return Hypergraph(nxt - 1, k, tuple(edges))


def dual(G: Graph) -> Hypergraph:
    """Dual hypergraph of a d-regular graph (d >= 2): vertices are the edges of G
    (numbered 1.. in canonical order), one hyperedge per vertex of G."""
    degs = G.degrees()
    if not degs or len(set(degs)) != 1:
        raise HypergraphError("dual needs a regular graph")
    d = degs[0]
    if d < 2:
        raise HypergraphError(f"dual needs degree >= 2, got {d}")
    incident: list[list[int]] = [[] for _ in range(G.n + 1)]
    for idx, (u, v) in enumerate(G.edges, start=1):
        incident[u].append(idx)
        incident[v].append(idx)
    return Hypergraph(len(G.edges), d, tuple(tuple(incident[v]) for v in range(1, G.n + 1)))


def random_kgraph(n: int, m: int, k: int, seed: int) -> Hypergraph:
    """m distinct k-subsets of 1..n drawn uniformly without replacement."""
    total = math.comb(n, k)
    if m > total:
        raise HypergraphError(f"m={m} exceeds C({n},{k})={total}")
    rng = make_rng(seed)
    if total <= 200_000:
        pool = list(combinations(range(1, n + 1), k))
        picks = rng.choice(total, size=m, replace=False) if m else []
        return Hypergraph(n, k, tuple(pool[int(i)] for i in picks))
    chosen: set[tuple[int, ...]] = set()
    while len(chosen) < m:
        e = tuple(sorted(int(v) + 1 for v in rng.choice(n, size=k, replace=False)))
        chosen.add(e)
    return Hypergraph(n, k, tuple(chosen))


def random_graph(n: int, m: int, seed: int) -> Graph:
    H = random_kgraph(n, m, 2, seed)
    return Graph(n, tuple((a, b) for a, b in H.edges))


def random_bipartite(left: int, right: int, m: int, seed: int) -> Graph:
    """m distinct edges between parts 1..left and left+1..left+right."""
    total = left * right
    if m > total:
        raise HypergraphError(f"m={m} exceeds {total} possible edges")
    rng = make_rng(seed)
    picks = rng.choice(total, size=m, replace=False) if m else []
    return Graph(left + right, tuple((1 + int(p) // right, left + 1 + int(p) % right) for p in picks))


def random_regular(n: int, d: int, seed: int, tries: int = 1000) -> Graph:
    """Uniform-ish d-regular simple graph by the pairing model with restarts."""
    if n * d % 2 or d >= n:
        raise HypergraphError(f"no simple {d}-regular graph on {n} vertices")
    rng = make_rng(seed)
    for _ in range(tries):
        points = [v for v in range(1, n + 1) for _ in range(d)]
        rng.shuffle(points)
        pairs = set()
        ok = True
        for a, b in zip(points[::2], points[1::2]):
            e = (min(a, b), max(a, b))
            if a == b or e in pairs:
                ok = False
                break
            pairs.add(e)
        if ok:
            return Graph(n, tuple(sorted(pairs)))
    raise HypergraphError(f"pairing model failed {tries} times")


def random_matching_pair(H: Hypergraph, seed: int, steps: int | None = None) -> tuple[Matching, Matching]:
    """Two matchings from independent chain runs (streams (seed, 0) and (seed, 1))."""
    if steps is None:
        steps = max(1, 20 * H.m)
    I, _ = run(H, ChainParams(steps, seed=_subseed(seed, 0)))
    F, _ = run(H, ChainParams(steps, seed=_subseed(seed, 1)))
    return I, F


def _subseed(seed: int, i: int) -> int:
    return int(make_rng(seed, i).integers(0, 2**63))
