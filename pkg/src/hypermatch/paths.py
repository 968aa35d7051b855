"""Canonical paths between matchings, the eta encoding, and their verifiers.

For an ordered pair (I, F) of matchings the canonical path walks the
components of I (+) F in increasing order of their smallest vertex and turns
each from its I-side into its F-side with legal chain moves.

* ``canonical_path_s0`` handles components that are paths or cycles in the
  intersection graph (always the case for comb-free hosts).
* ``canonical_path_general`` replaces every hyperedge of a component by a
  k-cycle on its sorted vertices, follows an Euler tour of the resulting
  skeleton, and removes or inserts hyperedges as the tour reaches them.

Tie-breaking conventions (all deterministic):

* the Euler tour starts at the smallest vertex of the component and leaves
  it towards the smaller cycle-neighbour inside the I-edge at that vertex, or
  inside the F-edge if no I-edge covers it;
* afterwards the tour always takes the unused skeleton edge to the smallest
  neighbour, and closed sub-tours are spliced in at the first vertex of the
  tour that still has unused edges;
* when an F-edge f is inserted, the edges of the current matching meeting it
  are removed in increasing order of their smallest vertex, the last one by
  a swap with f.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from . import guards
from .exact import _enumerate_masks, bits, build_transition_graph, count_matchings, to_mask
from .hypergraph import Hypergraph, HypergraphError, Matching
from .structure import wide_edges

PATH, CYCLE, GENERAL = "Path", "Cycle", "General"


class GeneralComponent(HypergraphError):
    """A component of I (+) F has an edge meeting three or more others."""


class Move(NamedTuple):
    kind: str  # "Remove", "Add" or "Swap"
    add: int | None
    remove: int | None

    def apply(self, state: frozenset[int]) -> frozenset[int]:
        out = set(state)
        if self.remove is not None:
            out.discard(self.remove)
        if self.add is not None:
            out.add(self.add)
        return frozenset(out)


def _remove(e: int) -> Move:
    return Move("Remove", None, e)


def _add(e: int) -> Move:
    return Move("Add", e, None)


def _swap(add: int, remove: int) -> Move:
    return Move("Swap", add, remove)


@dataclass(frozen=True)
class Component:
    edges: frozenset[int]
    kind: str
    min_vertex: int


@dataclass(frozen=True)
class ComponentDecomposition:
    components: tuple[Component, ...]

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class CanonicalPath:
    host: Hypergraph = field(repr=False)
    initial: frozenset[int]
    final: frozenset[int]
    states: tuple[frozenset[int], ...]
    moves: tuple[Move, ...]
    venues: tuple[int, ...]
    decomposition: ComponentDecomposition = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.moves)

    def transitions(self):
        return zip(self.states, self.states[1:])

    def matchings(self) -> list[Matching]:
        return [Matching(self.host, s) for s in self.states]

    def to_dict(self) -> dict:
        return {
            "initial": sorted(self.initial),
            "final": sorted(self.final),
            "length": self.length,
            "steps": [
                {
                    "step": j + 1,
                    "kind": mv.kind,
                    "add": mv.add,
                    "remove": mv.remove,
                    "venue": self.venues[j],
                    "state": sorted(self.states[j + 1]),
                }
                for j, mv in enumerate(self.moves)
            ],
            "components": [
                {"edges": sorted(c.edges), "kind": c.kind, "min_vertex": c.min_vertex}
                for c in self.decomposition
            ],
        }


def _members(x) -> frozenset[int]:
    if isinstance(x, Matching):
        return x.members
    return frozenset(x)


def _host_of(I, F, H: Hypergraph | None) -> Hypergraph:
    if H is not None:
        return H
    if isinstance(I, Matching) and isinstance(F, Matching):
        if I.host is not F.host and I.host != F.host:
            raise HypergraphError("matchings belong to different hypergraphs")
        return I.host
    raise TypeError("pass Matching objects or an explicit host")


def _min_vertex(H: Hypergraph, edges) -> int:
    return min(v for e in edges for v in H.edges[e])


# -- decomposition ---------------------------------------------------------


def decompose(I, F, H: Hypergraph | None = None) -> ComponentDecomposition:
    """Connected components of I (+) F, ordered by their smallest vertex."""
    H = _host_of(I, F, H)
    D = _members(I) ^ _members(F)
    dmask = to_mask(D)
    conf = H.conflicts
    seen: set[int] = set()
    comps = []
    for e in sorted(D):
        if e in seen:
            continue
        comp = {e}
        stack = [e]
        while stack:
            x = stack.pop()
            for y in bits(conf[x] & dmask):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        degs = [(conf[x] & dmask).bit_count() for x in comp]
        if max(degs) >= 3:
            kind = GENERAL
        elif len(comp) >= 3 and min(degs) == 2:
            kind = CYCLE
        else:
            kind = PATH
        comps.append(Component(frozenset(comp), kind, _min_vertex(H, comp)))
    comps.sort(key=lambda c: c.min_vertex)
    return ComponentDecomposition(tuple(comps))


def _walk(H: Hypergraph, comp: Component, start: int, nxt: int | None = None) -> list[int]:
    """Edges of a path/cycle component in traversal order from ``start``."""
    dmask = to_mask(comp.edges)
    order = [start]
    prev = None
    cur = start
    while True:
        nbrs = [y for y in bits(H.conflicts[cur] & dmask) if y != prev and y not in order]
        if not nbrs:
            break
        if nxt is not None and len(order) == 1:
            y = nxt
        else:
            y = nbrs[0]
        order.append(y)
        prev, cur = cur, y
    return order


def _min_meet(H: Hypergraph, a: int, b: int) -> int:
    return min(set(H.edges[a]) & set(H.edges[b]))


def _orient(H: Hypergraph, comp: Component, I: frozenset[int], F: frozenset[int]) -> list[int]:
    """The traversal order e_1..e_s the s=0 rules prescribe for one component."""
    edges = comp.edges
    if len(edges) == 1:
        return list(edges)
    dmask = to_mask(edges)
    if comp.kind == PATH:
        ends = sorted(e for e in edges if (H.conflicts[e] & dmask).bit_count() == 1)
        a = _walk(H, comp, ends[0])
        b = a[::-1]
        if len(edges) % 2 == 0:
            return a if a[0] in F else b
        return a if _min_meet(H, a[0], a[1]) < _min_meet(H, a[-2], a[-1]) else b
    # cycle: e_1 is the I-edge holding the smallest I-covered vertex
    i_verts = [(v, e) for e in edges if e in I for v in H.edges[e]]
    first = min(i_verts)[1]
    n1, n2 = bits(H.conflicts[first] & dmask)
    for second in (n1, n2):
        seq = _walk(H, comp, first, second)
        if _min_meet(H, seq[1], seq[2]) > _min_meet(H, seq[-2], seq[-1]):
            return seq
    raise AssertionError("no cycle orientation satisfies the direction rule")


def canonical_path_s0(I, F, H: Hypergraph | None = None) -> CanonicalPath:
    """Canonical path for hosts where every component is a path or a cycle."""
    H = _host_of(I, F, H)
    I, F = _members(I), _members(F)
    dec = decompose(I, F, H)
    moves: list[Move] = []
    venues: list[int] = []
    for r, comp in enumerate(dec):
        if comp.kind == GENERAL:
            raise GeneralComponent(
                f"component {sorted(comp.edges)} has an edge meeting three others; use canonical_path_general"
            )
        seq = _orient(H, comp, I, F)
        s = len(seq)
        if comp.kind == PATH and s % 2 == 0:
            mv = [_swap(seq[j], seq[j + 1]) for j in range(0, s, 2)]
        elif comp.kind == PATH and seq[0] in I:
            mv = [_remove(seq[0])] + [_swap(seq[j], seq[j + 1]) for j in range(1, s, 2)]
        elif comp.kind == PATH:
            mv = [_swap(seq[j], seq[j + 1]) for j in range(0, s - 1, 2)] + [_add(seq[-1])]
        else:
            mv = [_remove(seq[0])] + [_swap(seq[j], seq[j + 1]) for j in range(1, s - 1, 2)] + [_add(seq[-1])]
        moves.extend(mv)
        venues.extend([r] * len(mv))
    return _assemble(H, I, F, moves, venues, dec)


def _assemble(H, I, F, moves, venues, dec) -> CanonicalPath:
    states = [I]
    for mv in moves:
        states.append(mv.apply(states[-1]))
    return CanonicalPath(H, I, F, tuple(states), tuple(moves), tuple(venues), dec)


# -- general case ----------------------------------------------------------


class SkeletonEdge(NamedTuple):
    id: int
    u: int
    v: int
    hyperedge: int


def skeleton(H: Hypergraph, component) -> list[SkeletonEdge]:
    """Replace each hyperedge by the cycle through its vertices in sorted order.

    For k = 2 the cycle is a pair of parallel edges.
    """
    edges = component.edges if isinstance(component, Component) else component
    out = []
    for x in sorted(edges):
        vs = H.edges[x]
        for i in range(len(vs)):
            out.append(SkeletonEdge(len(out), vs[i], vs[(i + 1) % len(vs)], x))
    return out


def euler_tour(
    H: Hypergraph, component, I, F, skel: list[SkeletonEdge] | None = None
) -> list[tuple[int, int, int]]:
    """Directed Euler tour ``[(from, to, skeleton edge id), ...]`` of a component's skeleton."""
    I, F = _members(I), _members(F)
    skel = skeleton(H, component) if skel is None else skel
    if not skel:
        return []
    inc: dict[int, list[SkeletonEdge]] = defaultdict(list)
    for se in skel:
        inc[se.u].append(se)
        inc[se.v].append(se)
    for v, lst in inc.items():
        if len(lst) % 2:
            raise HypergraphError(f"skeleton vertex {v} has odd degree {len(lst)}")
    v0 = min(inc)
    at_v0 = sorted({se.hyperedge for se in inc[v0]})
    g = [x for x in at_v0 if x in I]
    host_edge = g[0] if g else at_v0[0]
    first = min((se for se in inc[v0] if se.hyperedge == host_edge), key=lambda se: (_other(se, v0), se.id))
    used: set[int] = set()

    def trail(start: int, forced: SkeletonEdge | None = None) -> list[tuple[int, int, int]]:
        out = []
        cur = start
        while True:
            if forced is not None:
                se, forced = forced, None
            else:
                free = [se for se in inc[cur] if se.id not in used]
                if not free:
                    return out
                se = min(free, key=lambda e: (_other(e, cur), e.id))
            used.add(se.id)
            nxt = _other(se, cur)
            out.append((cur, nxt, se.id))
            cur = nxt

    tour = trail(v0, first)
    i = 0
    while i < len(tour):
        v = tour[i][0]
        if any(se.id not in used for se in inc[v]):
            tour[i:i] = trail(v)
        else:
            i += 1
    if len(used) != len(skel):
        raise HypergraphError("skeleton is not connected")
    return tour


def _other(se: SkeletonEdge, v: int) -> int:
    return se.v if se.u == v else se.u


def canonical_path_general(I, F, H: Hypergraph | None = None) -> CanonicalPath:
    """Canonical path following Euler tours of the component skeletons."""
    H = _host_of(I, F, H)
    I, F = _members(I), _members(F)
    dec = decompose(I, F, H)
    state = set(I)
    moves: list[Move] = []
    venues: list[int] = []
    for r, comp in enumerate(dec):
        skel = skeleton(H, comp)
        for _, _, sid in euler_tour(H, comp, I, F, skel):
            x = skel[sid].hyperedge
            if x in I:
                if x in state:
                    state.discard(x)
                    moves.append(_remove(x))
                    venues.append(r)
            elif x not in state:
                hits = sorted(
                    (y for y in state if H.masks[y] & H.masks[x]),
                    key=lambda y: (H.edges[y][0], y),
                )
                for y in hits[:-1]:
                    state.discard(y)
                    moves.append(_remove(y))
                    venues.append(r)
                if hits:
                    state.discard(hits[-1])
                    moves.append(_swap(x, hits[-1]))
                else:
                    moves.append(_add(x))
                state.add(x)
                venues.append(r)
    return _assemble(H, I, F, moves, venues, dec)


def collapse_repeats(states) -> list[frozenset[int]]:
    out = []
    for s in states:
        if not out or out[-1] != s:
            out.append(s)
    return out


# -- encoding and near-matchings -------------------------------------------


def eta(I, F, M, M2) -> frozenset[int]:
    """(I (+) F) (+) (M u M')."""
    I, F, M, M2 = map(_members, (I, F, M, M2))
    return (I ^ F) ^ (M | M2)


def eta_checked(path: CanonicalPath, M, M2) -> frozenset[int]:
    M, M2 = _members(M), _members(M2)
    if (M, M2) not in set(path.transitions()):
        raise ValueError("(M, M') is not a transition of this canonical path")
    return eta(path.initial, path.final, M, M2)


def deletion_distance(H: Hypergraph, edges, limit: int) -> int | None:
    """Fewest edges whose removal leaves a matching, or None if more than ``limit``."""
    edges = sorted(edges)
    for r in range(min(limit, len(edges)) + 1):
        for R in combinations(edges, r):
            rest = [e for e in edges if e not in R]
            if H.is_matching(rest):
                return r
    return None


def in_omega_s(H: Hypergraph, edges, s: int) -> bool:
    """Membership in Omega_s(H): nonempty and at most s+1 deletions from a matching."""
    if not edges:
        return False
    return deletion_distance(H, edges, s + 1) is not None


def omega0_size(H: Hypergraph) -> int:
    """|Omega_0(H)|: nonempty matchings plus matchings with one conflicting edge added."""
    states = _enumerate_masks(H)
    extra = set()
    conf = H.conflicts
    for s in states:
        for e in range(H.m):
            if not s >> e & 1 and conf[e] & s:
                extra.add(s | 1 << e)
    return len(states) - 1 + len(extra)


# -- transitions -----------------------------------------------------------


def is_transition(H: Hypergraph, M, M2) -> bool:
    """True iff M -> M' is a non-trivial move of the matching chain."""
    M, M2 = _members(M), _members(M2)
    gone, new = M - M2, M2 - M
    if len(new) == 0 and len(gone) == 1:
        return True
    if len(new) != 1 or len(gone) > 1:
        return False
    (h,) = new
    meets = {y for y in M if H.masks[y] & H.masks[h]}
    return meets == gone


# -- all-pairs verification ------------------------------------------------


@dataclass
class PathReport:
    mode: str
    n: int
    m: int
    k: int
    s: int
    omega: int
    pairs_checked: int = 0
    transitions_total: int = 0
    transitions_used: int = 0
    max_pi: int = 0
    omega0: int | None = None
    omega_s_bound: int | None = None
    empty_images: int = 0
    images_outside: int = 0
    collision_count: int = 0
    collisions: list = field(default_factory=list)
    violation_count: int = 0
    violations: list = field(default_factory=list)
    witness_limit: int = 20

    @property
    def collisions_found(self) -> int:
        return self.collision_count

    @property
    def poly_measured(self) -> Fraction:
        return Fraction(self.max_pi, self.omega)

    @property
    def pi_bound(self) -> int:
        return self.omega0 if self.mode == "s0" else self.omega_s_bound

    @property
    def pi_bound_holds(self) -> bool:
        return self.max_pi <= self.pi_bound

    @property
    def ok(self) -> bool:
        return (
            self.collision_count == 0
            and self.violation_count == 0
            and self.images_outside == 0
            and self.pi_bound_holds
        )

    def violation(self, kind: str, **witness) -> None:
        self.violation_count += 1
        if len(self.violations) < self.witness_limit:
            self.violations.append({"kind": kind, **witness})

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n": self.n,
            "m": self.m,
            "k": self.k,
            "s": self.s,
            "omega": self.omega,
            "pairs_checked": self.pairs_checked,
            "transitions": self.transitions_total,
            "transitions_used": self.transitions_used,
            "max_pi": self.max_pi,
            "omega0": self.omega0,
            "omega_s_bound": str(self.omega_s_bound) if self.omega_s_bound is not None else None,
            "pi_bound_holds": self.pi_bound_holds,
            "poly_measured": str(self.poly_measured),
            "empty_images": self.empty_images,
            "images_outside": self.images_outside,
            "collisions": self.collision_count,
            "collision_witnesses": self.collisions,
            "violations": self.violation_count,
            "violation_witnesses": self.violations,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_path(path: CanonicalPath, report: PathReport, neighbors: dict[frozenset, frozenset] | None = None):
    """Record violations of the canonical-path properties (a)-(d) for one path."""
    H, I, F = path.host, path.initial, path.final
    pair = {"I": sorted(I), "F": sorted(F)}
    st = path.states
    if st[0] != I or st[-1] != F:
        report.violation("a", **pair)
    for j, (M, M2) in enumerate(path.transitions()):
        legal = is_transition(H, M, M2)
        if neighbors is not None:
            legal = legal and M2 in neighbors[M]
        if not legal:
            report.violation("b", step=j, M=sorted(M), M2=sorted(M2), **pair)
    both, either = I & F, I | F
    for j, M in enumerate(st):
        if not (both <= M <= either):
            report.violation("c", step=j, M=sorted(M), **pair)
    comps = path.decomposition.components
    for j, M in enumerate(st[:-1]):
        r = path.venues[j]
        if not (M ^ st[j + 1]) <= comps[r].edges:
            report.violation("venue", step=j, **pair)
        done = frozenset().union(*(c.edges for c in comps[:r]))
        todo = frozenset().union(*(c.edges for c in comps[r + 1 :]))
        if not ((F & done) <= M and (I & todo) <= M):
            report.violation("d", step=j, M=sorted(M), **pair)


def verify_injectivity(
    H: Hypergraph, general: bool = False, max_omega: int | None = guards.MAX_OMEGA_PATHS
) -> PathReport:
    """Build the canonical path of every ordered pair of matchings and check it.

    Reports property violations, eta collisions within each transition's
    path set, images outside Omega_0 (or Omega_s in general mode), and the
    largest number of paths through one transition.
    """
    omega = count_matchings(H, None)
    guards.check("max-omega", omega, max_omega)
    s = len(wide_edges(H))
    report = PathReport("general" if general else "s0", H.n, H.m, H.k, s, omega)
    T = build_transition_graph(H, None)
    states = [frozenset(bits(x)) for x in T.states]
    neighbors = {states[i]: frozenset(states[j] for j in nb) for i, nb in enumerate(T.neighbors)}
    report.transitions_total = T.transition_count()
    if general:
        report.omega_s_bound = H.n ** ((s + 1) * H.k) * omega
    else:
        report.omega0 = omega0_size(H)
    build = canonical_path_general if general else canonical_path_s0
    images: dict[tuple, dict[frozenset, tuple]] = defaultdict(dict)
    image_ok: dict[frozenset, bool] = {}
    for I in states:
        for F in states:
            report.pairs_checked += 1
            try:
                path = build(I, F, H)
            except GeneralComponent:
                report.violation("general-component", I=sorted(I), F=sorted(F))
                continue
            check_path(path, report, neighbors)
            for M, M2 in path.transitions():
                img = eta(I, F, M, M2)
                bucket = images[(M, M2)]
                prev = bucket.get(img)
                if prev is not None and prev != (I, F):
                    report.collision_count += 1
                    if len(report.collisions) < report.witness_limit:
                        report.collisions.append(
                            {
                                "M": sorted(M),
                                "M2": sorted(M2),
                                "image": sorted(img),
                                "first": {"I": sorted(prev[0]), "F": sorted(prev[1])},
                                "second": {"I": sorted(I), "F": sorted(F)},
                            }
                        )
                    continue
                bucket[img] = (I, F)
                if not img:
                    report.empty_images += 1
                    continue
                ok = image_ok.get(img)
                if ok is None:
                    ok = in_omega_s(H, img, s if general else 0)
                    image_ok[img] = ok
                if not ok:
                    report.images_outside += 1
                    report.violation("image", M=sorted(M), M2=sorted(M2), image=sorted(img), I=sorted(I), F=sorted(F))
    report.transitions_used = len(images)
    report.max_pi = max((len(b) for b in images.values()), default=0)
    return report


@dataclass
class CutReport:
    omega: int
    max_pi: int
    subsets_checked: int
    cut_violations: int
    phi: Fraction
    p_min: Fraction
    mode: str
    witnesses: list = field(default_factory=list)

    @property
    def poly_measured(self) -> Fraction:
        return Fraction(self.max_pi, self.omega)

    @property
    def phi_lower(self) -> Fraction:
        """p_min / (2 poly) with poly = max|Pi| / |Omega|."""
        return self.p_min / (2 * self.poly_measured)

    @property
    def phi_holds(self) -> bool:
        return self.phi >= self.phi_lower

    @property
    def phi_holds_raw(self) -> bool:
        """The coarser check Phi >= p_min / max|Pi|."""
        return self.phi >= self.p_min / self.max_pi

    @property
    def ok(self) -> bool:
        return self.cut_violations == 0 and self.phi_holds and self.phi_holds_raw

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "omega": self.omega,
            "max_pi": self.max_pi,
            "poly_measured": str(self.poly_measured),
            "subsets_checked": self.subsets_checked,
            "cut_violations": self.cut_violations,
            "cut_witnesses": self.witnesses,
            "phi": str(self.phi),
            "p_min": str(self.p_min),
            "phi_lower": str(self.phi_lower),
            "phi_holds": self.phi_holds,
            "phi_holds_raw": self.phi_holds_raw,
            "ok": self.ok,
        }


def cut_bound_check(
    H: Hypergraph, general: bool | None = None, max_omega: int | None = guards.MAX_OMEGA_CONDUCTANCE
) -> CutReport:
    """Check |cut(S)| >= |S|(|Omega|-|S|) / (poly |Omega|) for every admissible S,
    and the resulting conductance lower bound, with poly = max|Pi| / |Omega|
    measured from the canonical paths."""
    from .chain import conductance_exact, cut_table, p_min

    import numpy as np

    omega = count_matchings(H, None)
    guards.check("max-omega", omega, max_omega)
    if general is None:
        general = bool(wide_edges(H))
    rep = verify_injectivity(H, general=general, max_omega=None)
    T = build_transition_graph(H, None)
    masks, sizes, cuts = cut_table(T)
    # |cut| * max_pi >= |S| (|Omega| - |S|), all integers
    bad = np.nonzero(cuts * rep.max_pi < sizes * (omega - sizes))[0]
    witnesses = [
        {"S": bits(int(masks[b])), "cut": int(cuts[b]), "size": int(sizes[b])} for b in bad[:20]
    ]
    phi = conductance_exact(T, max_omega=None).phi
    return CutReport(omega, rep.max_pi, int(masks.size), int(bad.size), phi, p_min(H), rep.mode, witnesses)
