"""Hypergraphs, matchings and the text/JSON formats they travel in.

Vertices are the integers ``1..n``. Edges are stored as sorted tuples in
lexicographic order, so an edge's index is stable and two equal hypergraphs
serialize to the same bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence


class HypergraphError(ValueError):
    """Raised for inputs that violate the hypergraph invariants."""


class ParseError(HypergraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Hypergraph:
    """An immutable k-uniform hypergraph on vertices ``1..n``.

    ``edges`` may be given in any order and with unsorted vertices; the
    constructor canonicalizes both. Edge ``i`` is ``edges[i]`` afterwards.
    """

    n: int
    k: int
    edges: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.k < 2:
            raise HypergraphError(f"uniformity k must be >= 2, got {self.k}")
        if self.n < 0:
            raise HypergraphError(f"vertex count must be >= 0, got {self.n}")
        canon = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            _check_edge(t, self.n, self.k)
            canon.append(t)
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise HypergraphError(f"duplicate edge {list(a)}")
        object.__setattr__(self, "edges", tuple(canon))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Vertex bitmask of every edge (bit v set iff v is in the edge)."""
        return tuple(sum(1 << v for v in e) for e in self.edges)

    @cached_property
    def conflicts(self) -> tuple[int, ...]:
        """Edge-index bitmask of the edges meeting edge i, i itself excluded."""
        masks = self.masks
        out = []
        for i, a in enumerate(masks):
            c = 0
            for j, b in enumerate(masks):
                if i != j and a & b:
                    c |= 1 << j
            out.append(c)
        return tuple(out)

    def index(self, edge: Iterable[int]) -> int:
        """Index of ``edge`` in canonical order."""
        t = tuple(sorted(edge))
        try:
            return self._index_map[t]
        except KeyError:
            raise HypergraphError(f"{list(t)} is not an edge") from None

    @cached_property
    def _index_map(self) -> dict[tuple[int, ...], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        """Degrees of vertices 1..n (position 0 is vertex 1)."""
        deg = [0] * (self.n + 1)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg[1:]

    def remove_edges(self, indices: Iterable[int]) -> "Hypergraph":
        drop = set(indices)
        return Hypergraph(self.n, self.k, tuple(e for i, e in enumerate(self.edges) if i not in drop))

    def vertices_of(self, indices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for i in indices:
            out.update(self.edges[i])
        return out

    def is_matching(self, indices: Iterable[int]) -> bool:
        seen = 0
        for i in indices:
            if seen & self.masks[i]:
                return False
            seen |= self.masks[i]
        return True

    def matching(self, indices: Iterable[int] = ()) -> "Matching":
        return Matching(self, frozenset(indices))

    # -- formats ---------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"{self.n} {self.m} {self.k}"]
        lines.extend(" ".join(map(str, e)) for e in self.edges)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_edge(edge: tuple[int, ...], n: int, k: int) -> None:
    if len(edge) != k:
        raise HypergraphError(f"edge {list(edge)} has {len(edge)} vertices, expected {k}")
    if len(set(edge)) != k:
        raise HypergraphError(f"edge {list(edge)} repeats a vertex")
    for v in edge:
        if not 1 <= v <= n:
            raise HypergraphError(f"vertex {v} out of range 1..{n}")


@dataclass(frozen=True)
class Matching:
    """A set of pairwise disjoint edge indices of ``host``."""

    host: Hypergraph = field(compare=False, repr=False)
    members: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        for i in self.members:
            if not 0 <= i < self.host.m:
                raise HypergraphError(f"edge index {i} out of range")
        if not self.host.is_matching(self.members):
            raise HypergraphError(f"edges {sorted(self.members)} are not pairwise disjoint")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, i: int) -> bool:
        return i in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    @property
    def vertices(self) -> set[int]:
        return self.host.vertices_of(self.members)

    def to_list(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True)
class IntersectionGraph:
    """Graph on the edge indices of a hypergraph; i ~ j iff the edges meet."""

    adjacency: tuple[frozenset[int], ...]

    @property
    def order(self) -> int:
        return len(self.adjacency)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def edge_list(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.order) for b in sorted(self.adjacency[a]) if a < b]

    def matrix(self):
        import numpy as np

        A = np.zeros((self.order, self.order), dtype=np.int8)
        for a, nbrs in enumerate(self.adjacency):
            for b in nbrs:
                A[a, b] = 1
        return A


def intersection_graph(H: Hypergraph) -> IntersectionGraph:
    adj = []
    for c in H.conflicts:
        adj.append(frozenset(j for j in range(H.m) if c >> j & 1))
    return IntersectionGraph(tuple(adj))


def symmetric_difference(A: Matching, B: Matching) -> frozenset[int]:
    if A.host is not B.host and A.host != B.host:
        raise HypergraphError("matchings belong to different hypergraphs")
    return A.members ^ B.members


def max_degree(H: Hypergraph) -> int:
    return max(H.degrees(), default=0)


def is_linear(H: Hypergraph) -> bool:
    """True iff no two edges share more than one vertex."""
    seen: set[tuple[int, int]] = set()
    for e in H.edges:
        for pair in combinations(e, 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


def is_regular(H: Hypergraph, d: int) -> bool:
    """True iff every vertex 1..n has degree d.

    Isolated vertices count, so a single edge with n > k is not 1-regular.
    """
    return all(x == d for x in H.degrees())


# -- parsing ---------------------------------------------------------------


def parse(text: str) -> Hypergraph:
    """Parse the ``n m k`` text format or its JSON mirror."""
    if text.lstrip().startswith("{"):
        return parse_json(text)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = lines[0].split(" ")
    if len(header) != 3 or not all(_is_decimal(x) for x in header):
        raise ParseError(f"malformed header {lines[0]!r}, expected 'n m k'", 1)
    n, m, k = map(int, header)
    if k < 2:
        raise ParseError(f"uniformity k must be >= 2, got {k}", 1)
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", 1)
    seen: dict[tuple[int, ...], int] = {}
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if not all(_is_decimal(x) for x in parts):
            raise ParseError(f"malformed edge line {line!r}", lineno)
        edge = tuple(int(x) for x in parts)
        if len(edge) != k:
            raise ParseError(f"edge has {len(edge)} vertices, expected {k}", lineno)
        if any(a >= b for a, b in zip(edge, edge[1:])):
            raise ParseError("edge vertices must be strictly increasing", lineno)
        for v in edge:
            if not 1 <= v <= n:
                raise ParseError(f"vertex {v} out of range 1..{n}", lineno)
        if edge in seen:
            raise ParseError(f"duplicate edge (first seen on line {seen[edge]})", lineno)
        seen[edge] = lineno
        edges.append(edge)
    return Hypergraph(n, k, tuple(edges))


def _is_decimal(s: str) -> bool:
    return s.isascii() and s.isdigit()


def parse_json(text: str) -> Hypergraph:
    try:
        data = json.loads(text)
        n, k, edges = int(data["n"]), int(data["k"]), data["edges"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"malformed JSON hypergraph: {exc}") from exc
    seen = set()
    for i, e in enumerate(edges):
        t = tuple(sorted(e))
        if t in seen:
            raise ParseError(f"duplicate edge {list(t)} at edges[{i}]")
        seen.add(t)
    try:
        return Hypergraph(n, k, tuple(tuple(e) for e in edges))
    except HypergraphError as exc:
        raise ParseError(str(exc)) from exc


def serialize(H: Hypergraph) -> str:
    return H.serialize()


def read_matching(H: Hypergraph, text: str) -> Matching:
    """Read a matching given as a JSON array of edge indices."""
    data = json.loads(text)
    if isinstance(data, dict):
        data = data["members"]
    return Matching(H, frozenset(int(i) for i in data))


# -- plain graphs (inputs to the reduction generators) ----------------------


@dataclass(frozen=True)
class Graph:
    """Simple graph on ``1..n`` with edges stored as sorted pairs."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        canon = sorted({tuple(sorted(e)) for e in self.edges})
        if len(canon) != len(self.edges):
            raise HypergraphError("graph has repeated edges")
        for u, v in canon:
            if u == v:
                raise HypergraphError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise HypergraphError(f"edge ({u}, {v}) out of range 1..{self.n}")
        object.__setattr__(self, "edges", tuple(canon))

    def degrees(self) -> list[int]:
        deg = [0] * (self.n + 1)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg[1:]

    def is_bipartite(self) -> bool:
        color: dict[int, int] = {}
        adj: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for s in range(1, self.n + 1):
            if s in color:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if w not in color:
                        color[w] = 1 - color[u]
                        stack.append(w)
                    elif color[w] == color[u]:
                        return False
        return True

    def serialize(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` + edge-pair-lines graph format."""
    lines = [ln for ln in text.split("\n")]
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = lines[0].split()
    if len(header) != 2 or not all(_is_decimal(x) for x in header):
        raise ParseError(f"malformed header {lines[0]!r}, expected 'n m'", 1)
    n, m = map(int, header)
    if len(lines) - 1 != m:
        raise ParseError(f"header declares {m} edges but {len(lines) - 1} edge lines follow", 1)
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2 or not all(_is_decimal(x) for x in parts):
            raise ParseError(f"malformed edge line {line!r}", lineno)
        edges.append((int(parts[0]), int(parts[1])))
    try:
        return Graph(n, tuple(edges))
    except HypergraphError as exc:
        raise ParseError(str(exc)) from exc


def hypergraph_from(edges: Sequence[Sequence[int]], k: int | None = None, n: int | None = None) -> Hypergraph:
    """Convenience constructor inferring ``n`` and ``k`` from the edges."""
    if k is None:
        if not edges:
            raise HypergraphError("cannot infer k from an empty edge list")
        k = len(edges[0])
    if n is None:
        n = max((max(e) for e in edges), default=0)
    return Hypergraph(n, k, tuple(tuple(e) for e in edges))
