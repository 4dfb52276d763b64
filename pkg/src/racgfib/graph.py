"""Simplicial graphs on at most 128 vertices, backed by integer bitsets.

A :class:`VertexSet` is an immutable subset of ``{0, ..., n-1}``.  The same
object plays three roles in this package: a *state*, a *move*, and an
element of the group ``Z_2^n`` (multiplication is symmetric difference).

Internally everything is a Python ``int`` whose bit ``v`` says whether
vertex ``v`` is present.  The hot loops (connectivity, clique enumeration)
work directly on those ints; ``VertexSet`` is the public face.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 128


def iter_bits(bits: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``bits`` in increasing order."""
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class VertexSet:
    """Subset of the ambient vertex set ``{0, ..., n-1}``."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"ambient size {self.n} outside 0..{MAX_VERTICES}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError("vertex set has members outside the ambient range")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> VertexSet:
        vertices = list(vertices)
        for v in vertices:
            if not 0 <= v < n:
                raise ValueError(f"vertex {v} out of range for n={n}")
        return cls(n, mask_of(vertices))

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, (1 << n) - 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.bits >> v & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: VertexSet) -> None:
        if self.n != other.n:
            raise ValueError(f"ambient mismatch: {self.n} vs {other.n}")

    def __or__(self, other: VertexSet) -> VertexSet:
        self._check(other)
        return VertexSet(self.n, self.bits | other.bits)

    def __and__(self, other: VertexSet) -> VertexSet:
        self._check(other)
        return VertexSet(self.n, self.bits & other.bits)

    def __xor__(self, other: VertexSet) -> VertexSet:
        self._check(other)
        return VertexSet(self.n, self.bits ^ other.bits)

    def __sub__(self, other: VertexSet) -> VertexSet:
        self._check(other)
        return VertexSet(self.n, self.bits & ~other.bits)

    def __invert__(self) -> VertexSet:
        return VertexSet(self.n, ((1 << self.n) - 1) ^ self.bits)

    def complement(self) -> VertexSet:
        return ~self

    def to_list(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, {self.to_list()})"


@dataclass(frozen=True)
class Graph:
    """Immutable simplicial graph.  ``adj[v]`` is the neighbour bitmask of ``v``."""

    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"graph size {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels length does not match n")
        for v, nb in enumerate(self.adj):
            if nb < 0 or nb >> self.n:
                raise ValueError(f"adjacency of {v} leaves the vertex range")
            if nb >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"asymmetric adjacency between {v} and {u}")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def vertices(self) -> VertexSet:
        return VertexSet.full(self.n)

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.adj[v])

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(a).count("1") for a in self.adj]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v``, sorted lexicographically."""
        out = []
        for u in range(self.n):
            for v in iter_bits(self.adj[u] >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    @property
    def edge_count(self) -> int:
        return sum(self.degrees()) // 2

    def induced(self, s: VertexSet | int) -> Graph:
        """Induced subgraph on ``s``, relabelled to ``0..|s|-1`` in vertex order."""
        bits = s.bits if isinstance(s, VertexSet) else s
        keep = list(iter_bits(bits))
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        labels = None
        if self.labels is not None:
            labels = [self.labels[v] for v in keep]
        return build_graph(len(keep), edges, labels)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph with vertex ``v`` renamed ``perm[v]``."""
        edges = [(perm[u], perm[v]) for u, v in self.edges()]
        return build_graph(self.n, edges)

    def to_json(self) -> str:
        doc: dict = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> Graph:
        doc = json.loads(text)
        if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
            raise ValueError("graph JSON needs 'n' and 'edges'")
        return build_graph(doc["n"], [tuple(e) for e in doc["edges"]], doc.get("labels"))

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            if self.labels is not None:
                lines.append(f'  {v} [label="{self.labels[v]}"];')
            else:
                lines.append(f"  {v};")
        for u, v in self.edges():
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Sequence[str] | None = None,
) -> Graph:
    """Build a graph from an edge list; duplicate and reversed pairs collapse."""
    if not 0 <= n <= MAX_VERTICES:
        raise ValueError(f"graph size {n} outside 0..{MAX_VERTICES}")
    adj = [0] * n
    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {(u, v)} has a vertex outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"loop edge at vertex {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj), tuple(labels) if labels is not None else None)


def connected_mask(adj: Sequence[int], s: int) -> bool:
    """True iff bitmask ``s`` is nonempty and induces a connected subgraph."""
    if not s:
        return False
    reach = frontier = s & -s
    while frontier:
        nb = 0
        while frontier:
            low = frontier & -frontier
            nb |= adj[low.bit_length() - 1]
            frontier ^= low
        nb &= s
        frontier = nb & ~reach
        reach |= nb
    return reach == s


def component_count(adj: Sequence[int], s: int) -> int:
    count = 0
    rest = s
    while rest:
        reach = frontier = rest & -rest
        while frontier:
            nb = 0
            while frontier:
                low = frontier & -frontier
                nb |= adj[low.bit_length() - 1]
                frontier ^= low
            nb &= rest
            frontier = nb & ~reach
            reach |= nb
        rest &= ~reach
        count += 1
    return count


def is_connected_induced(g: Graph, s: VertexSet) -> bool:
    """Whether ``s`` is nonempty and induces a connected subgraph of ``g``.

    The empty set counts as disconnected, matching the legality rule that
    both halves of a state be nonempty.
    """
    return connected_mask(g.adj, s.bits)


@dataclass(frozen=True)
class Bipartition:
    classes: tuple[VertexSet, VertexSet]


@dataclass(frozen=True)
class NotBipartite:
    odd_cycle: tuple[int, ...]


def bipartition_classes(g: Graph) -> Bipartition | NotBipartite:
    """Two-colour ``g`` by BFS; each component root gets class 0.

    Returns the odd cycle found by the first conflicting edge when the graph
    is not bipartite.
    """
    color = [-1] * g.n
    parent = [-1] * g.n
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in iter_bits(g.adj[u]):
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return NotBipartite(_odd_cycle(parent, u, w))
    a = mask_of(v for v in range(g.n) if color[v] == 0)
    b = mask_of(v for v in range(g.n) if color[v] == 1)
    return Bipartition((VertexSet(g.n, a), VertexSet(g.n, b)))


def _odd_cycle(parent: list[int], u: int, w: int) -> tuple[int, ...]:
    # u and w are BFS-tree nodes at equal depth joined by an edge
    path_u, path_w = [u], [w]
    while path_u[-1] != path_w[-1]:
        path_u.append(parent[path_u[-1]])
        path_w.append(parent[path_w[-1]])
    return tuple(path_u + path_w[-2::-1])


def is_isomorphic(g1: Graph, g2: Graph) -> list[int] | None:
    """Find ``phi`` with ``{u,v}`` an edge of g1 iff ``{phi[u],phi[v]}`` is one of g2.

    Backtracking over a BFS vertex order.  Candidates for the next vertex
    are restricted to vertices whose adjacency to the already-mapped images
    matches exactly, and to equal refined colour (iterated degree
    signature).  Returned maps are checked edge-by-edge.
    """
    if g1.n != g2.n or g1.edge_count != g2.edge_count:
        return None
    n = g1.n
    if n == 0:
        return []
    c1, c2 = _refine_colors(g1, g2)
    if sorted(c1) != sorted(c2):
        return None

    order = _bfs_order(g1)
    # for each position, bitmask of earlier-ordered vertices (in g1 ids)
    earlier = [0] * n
    acc = 0
    for i, v in enumerate(order):
        earlier[i] = acc
        acc |= 1 << v

    phi = [-1] * n
    used = 0
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(c2[v], []).append(v)

    def image_mask(bits: int) -> int:
        m = 0
        for x in iter_bits(bits):
            m |= 1 << phi[x]
        return m

    def extend(i: int) -> bool:
        nonlocal used
        if i == n:
            return True
        v = order[i]
        mapped_nb = g1.adj[v] & earlier[i]
        want = image_mask(mapped_nb)
        mapped_all = image_mask(earlier[i])
        if mapped_nb:
            anchor = phi[next(iter_bits(mapped_nb))]
            pool = [w for w in iter_bits(g2.adj[anchor] & ~used)]
        else:
            pool = [w for w in by_color[c1[v]] if not used >> w & 1]
        for w in pool:
            if c2[w] != c1[v]:
                continue
            if g2.adj[w] & mapped_all != want:
                continue
            phi[v] = w
            used |= 1 << w
            if extend(i + 1):
                return True
            used &= ~(1 << w)
            phi[v] = -1
        return False

    if not extend(0):
        return None
    for u, v in g1.edges():
        if not g2.has_edge(phi[u], phi[v]):
            raise AssertionError("isomorphism search produced a non-edge-preserving map")
    return phi


def _refine_colors(g1: Graph, g2: Graph) -> tuple[list[int], list[int]]:
    """Joint colour refinement so colour ids are comparable across both graphs."""
    c1 = g1.degrees()
    c2 = g2.degrees()
    while True:
        sig1 = [(c1[v], tuple(sorted(c1[u] for u in iter_bits(g1.adj[v])))) for v in range(g1.n)]
        sig2 = [(c2[v], tuple(sorted(c2[u] for u in iter_bits(g2.adj[v])))) for v in range(g2.n)]
        palette = {s: i for i, s in enumerate(sorted(set(sig1) | set(sig2)))}
        n1 = [palette[s] for s in sig1]
        n2 = [palette[s] for s in sig2]
        if len(set(n1)) == len(set(c1)) and len(set(n2)) == len(set(c2)):
            return n1, n2
        c1, c2 = n1, n2


def _bfs_order(g: Graph) -> list[int]:
    seen = 0
    order = []
    for root in range(g.n):
        if seen >> root & 1:
            continue
        seen |= 1 << root
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in iter_bits(g.adj[u] & ~seen):
                seen |= 1 << w
                queue.append(w)
    return order
