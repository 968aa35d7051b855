"""Wide edges, 3-combs and claw centers.

An edge is wide when it meets three pairwise disjoint edges. A hypergraph with
at most ``s`` wide edges belongs to the class H^k_s; ``classify`` reports the
smallest such ``s``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from itertools import combinations

from .hypergraph import Hypergraph, IntersectionGraph, intersection_graph, is_linear, max_degree


@dataclass(frozen=True)
class StructureReport:
    wide_edges: tuple[int, ...]
    comb_witness: tuple[int, int, int, int] | None
    claw_centers: tuple[int, ...]
    s: int
    linear: bool
    max_degree: int
    n: int
    m: int
    k: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["wide_edges"] = list(self.wide_edges)
        d["claw_centers"] = list(self.claw_centers)
        d["comb_witness"] = None if self.comb_witness is None else list(self.comb_witness)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _disjoint_triple(H: Hypergraph, e: int) -> tuple[int, int, int] | None:
    """First (lexicographic) triple of pairwise disjoint edges meeting edge e."""
    masks = H.masks
    c = H.conflicts[e]
    nbrs = [j for j in range(H.m) if c >> j & 1]
    for a, b, d in combinations(nbrs, 3):
        if not (masks[a] & masks[b] or masks[a] & masks[d] or masks[b] & masks[d]):
            return a, b, d
    return None


def wide_edges(H: Hypergraph) -> frozenset[int]:
    return frozenset(e for e in range(H.m) if _disjoint_triple(H, e) is not None)


def find_three_comb(H: Hypergraph) -> tuple[int, int, int, int] | None:
    """Return ``(e1, e2, e3, e4)`` with e1..e3 a matching all met by e4.

    Scans e4 in index order, then the triple lexicographically, so the
    witness is reproducible.
    """
    for e4 in range(H.m):
        t = _disjoint_triple(H, e4)
        if t is not None:
            return (*t, e4)
    return None


def claw_centers(L: IntersectionGraph) -> frozenset[int]:
    """Vertices with three pairwise non-adjacent neighbours."""
    out = set()
    for v in range(L.order):
        nbrs = sorted(L.neighbors(v))
        for a, b, c in combinations(nbrs, 3):
            if not (L.adjacent(a, b) or L.adjacent(a, c) or L.adjacent(b, c)):
                out.add(v)
                break
    return frozenset(out)


def classify(H: Hypergraph) -> StructureReport:
    wide = wide_edges(H)
    return StructureReport(
        wide_edges=tuple(sorted(wide)),
        comb_witness=find_three_comb(H),
        claw_centers=tuple(sorted(claw_centers(intersection_graph(H)))),
        s=len(wide),
        linear=is_linear(H),
        max_degree=max_degree(H),
        n=H.n,
        m=H.m,
        k=H.k,
    )


def in_class(H: Hypergraph, s: int) -> bool:
    """Membership in H^k_s."""
    return len(wide_edges(H)) <= s
