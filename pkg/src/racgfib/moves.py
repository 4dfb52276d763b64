"""States, moves, move systems and their orbits under ``Z_2^n``.

A state is a vertex subset; a move at ``v`` is a vertex subset containing
``v`` and avoiding every neighbour of ``v``.  A move system assigns one move
to every vertex.  The distinct moves generate an elementary abelian group
acting on states by symmetric difference, and a (system, start) pair is
admissible when every state of the orbit is legal.

Orbit states are addressed by coordinate vectors over an F_2 basis of the
distinct moves.  As an int, bit ``i`` of a coordinate selects basis move
``i``; as a bitstring, character ``i`` does (so ``"110"`` is ``m1 m2 S``).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .graph import Graph, VertexSet, connected_mask, iter_bits, mask_of

DEFAULT_ORBIT_CAP = 1 << 24


class OrbitTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MoveSystem:
    """Per-vertex move assignment; ``moves[v]`` is the move at ``v``."""

    moves: tuple[VertexSet, ...]
    # preferred generator order (label-class systems); empty means first appearance
    classes: tuple[VertexSet, ...] = field(default=(), compare=False)

    @classmethod
    def from_classes(cls, n: int, classes: Sequence[Iterable[int]]) -> MoveSystem:
        """Label-class system: the move at ``v`` is the class containing ``v``."""
        masks = [VertexSet.of(n, c) for c in classes]
        moves: list[VertexSet | None] = [None] * n
        for m in masks:
            for v in m:
                if moves[v] is not None:
                    raise ValueError(f"vertex {v} lies in two classes")
                moves[v] = m
        missing = [v for v in range(n) if moves[v] is None]
        if missing:
            raise ValueError(f"vertices without a class: {missing}")
        return cls(tuple(moves), tuple(m for m in masks if m.bits))  # type: ignore[arg-type]

    @property
    def n(self) -> int:
        return len(self.moves)

    @property
    def distinct_moves(self) -> list[VertexSet]:
        if self.classes:
            return list(self.classes)
        seen: dict[int, VertexSet] = {}
        for m in self.moves:
            seen.setdefault(m.bits, m)
        return list(seen.values())

    def assignment(self) -> list[int]:
        index = {m.bits: i for i, m in enumerate(self.distinct_moves)}
        return [index[m.bits] for m in self.moves]


@dataclass(frozen=True)
class MoveViolation:
    vertex: int
    prop: int  # 1: v not in m_v; 2: neighbour u of v lies in m_v
    witness: int


def validate_move_system(g: Graph, ms: MoveSystem) -> list[MoveViolation]:
    """All violations of the two move axioms; an empty list means valid."""
    if ms.n != g.n:
        raise ValueError(f"move system has {ms.n} vertices, graph has {g.n}")
    out = []
    for v, m in enumerate(ms.moves):
        if v not in m:
            out.append(MoveViolation(v, 1, v))
        for u in iter_bits(m.bits & g.adj[v]):
            out.append(MoveViolation(v, 2, u))
    return out


def is_legal_state(g: Graph, s: VertexSet) -> bool:
    return connected_mask(g.adj, s.bits) and connected_mask(g.adj, g.full_mask ^ s.bits)


def f2_basis(vectors: Sequence[int]) -> list[int]:
    """Indices of a maximal F_2-independent subset, chosen greedily in order."""
    reduced: dict[int, int] = {}  # pivot bit -> reduced vector
    keep = []
    for i, vec in enumerate(vectors):
        x = vec
        while x:
            top = x.bit_length() - 1
            if top not in reduced:
                reduced[top] = x
                keep.append(i)
                break
            x ^= reduced[top]
    return keep


def coords_to_bitstring(coords: int, rank: int) -> str:
    return "".join("1" if coords >> i & 1 else "0" for i in range(rank))


def bitstring_to_coords(text: str, rank: int | None = None) -> int:
    if rank is not None and len(text) != rank:
        raise ValueError(f"coordinate string {text!r} should have length {rank}")
    if any(ch not in "01" for ch in text):
        raise ValueError(f"coordinate string {text!r} is not a bitstring")
    return sum(1 << i for i, ch in enumerate(text) if ch == "1")


def gray_sequence(rank: int) -> Iterator[tuple[int, int]]:
    """Yield ``(coords, toggled_generator)``; the first item toggles nothing (-1)."""
    yield 0, -1
    coords = 0
    for i in range(1, 1 << rank):
        bit = (i & -i).bit_length() - 1
        coords ^= 1 << bit
        yield coords, bit


@dataclass(frozen=True)
class Orbit:
    """The orbit ``M . start`` indexed by coordinates over ``generators``."""

    n: int
    generators: tuple[int, ...]
    start: int

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def size(self) -> int:
        return 1 << self.rank

    def state_mask(self, coords: int) -> int:
        s = self.start
        for i in iter_bits(coords):
            s ^= self.generators[i]
        return s

    def state(self, coords: int) -> VertexSet:
        return VertexSet(self.n, self.state_mask(coords))

    def coords_of(self, s: VertexSet | int) -> int | None:
        """Coordinates of a state, or None if it lies outside the orbit."""
        target = (s.bits if isinstance(s, VertexSet) else s) ^ self.start
        # solve by elimination against the (independent) generators
        rows = [(g, 1 << i) for i, g in enumerate(self.generators)]
        pivots: dict[int, tuple[int, int]] = {}
        for g, tag in rows:
            while g:
                top = g.bit_length() - 1
                if top not in pivots:
                    pivots[top] = (g, tag)
                    break
                pg, ptag = pivots[top]
                g ^= pg
                tag ^= ptag
        coords = 0
        while target:
            top = target.bit_length() - 1
            if top not in pivots:
                return None
            pg, ptag = pivots[top]
            target ^= pg
            coords ^= ptag
        return coords

    def __iter__(self) -> Iterator[tuple[int, VertexSet]]:
        """States in Gray-code order of coordinates."""
        s = self.start
        for coords, bit in gray_sequence(self.rank):
            if bit >= 0:
                s ^= self.generators[bit]
            yield coords, VertexSet(self.n, s)

    def masks_in_range(self, lo: int, hi: int) -> Iterator[tuple[int, int]]:
        """``(coords, state mask)`` for coordinates ``lo <= c < hi`` in natural order."""
        for c in range(lo, hi):
            yield c, self.state_mask(c)


def enumerate_orbit(
    ms: MoveSystem, s0: VertexSet, cap: int = DEFAULT_ORBIT_CAP
) -> Orbit:
    """Orbit of ``s0`` under the group generated by the distinct moves.

    Raises :class:`OrbitTooLarge` when ``2**rank`` exceeds ``cap``.
    """
    if s0.n != ms.n:
        raise ValueError("start state and move system disagree on n")
    distinct = [m.bits for m in ms.distinct_moves]
    basis = [distinct[i] for i in f2_basis(distinct)]
    if (1 << len(basis)) > cap:
        raise OrbitTooLarge(f"orbit of size 2^{len(basis)} exceeds cap {cap}")
    return Orbit(ms.n, tuple(basis), s0.bits)


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    checked: int
    illegal_count: int
    first_illegal: str | None  # lexicographically least coordinate bitstring


def is_admissible(
    g: Graph, ms: MoveSystem, s0: VertexSet, cap: int = DEFAULT_ORBIT_CAP
) -> Admissibility:
    """Check that every state of the orbit of ``s0`` is legal.

    Large orbits (over 4096 states) go through the compiled legality kernel;
    small ones are checked here directly.
    """
    orbit = enumerate_orbit(ms, s0, cap)
    if orbit.size > 4096:
        from ._kernel import orbit_legality

        legal = orbit_legality(g, orbit)
        bad = [int(c) for c in (~legal).nonzero()[0]]
    else:
        full = g.full_mask
        bad = [
            c
            for c, s in orbit.masks_in_range(0, orbit.size)
            if not (connected_mask(g.adj, s) and connected_mask(g.adj, full ^ s))
        ]
    first = None
    if bad:
        first = min(coords_to_bitstring(c, orbit.rank) for c in bad)
    return Admissibility(not bad, orbit.size, len(bad), first)


class Direction(enum.Enum):
    OUTGOING = "outgoing"
    INCOMING = "incoming"


def edge_direction(s: VertexSet, v: int) -> Direction:
    """Orientation of the 1-cube for vertex ``v`` at the cube vertex with state ``s``."""
    return Direction.OUTGOING if v in s else Direction.INCOMING


def search_starting_state(
    g: Graph, ms: MoveSystem, candidates: Iterable[VertexSet]
) -> list[VertexSet]:
    """Candidates whose whole orbit is legal, in generation order."""
    return [s for s in candidates if is_admissible(g, ms, s).admissible]


# -- System JSON / orbit dump -------------------------------------------------


def system_to_json(ms: MoveSystem, start: VertexSet) -> str:
    distinct = ms.distinct_moves
    doc = {
        "moves": [m.to_list() for m in distinct],
        "assignment": ms.assignment(),
        "start": start.to_list(),
    }
    return json.dumps(doc)


def system_from_json(text: str) -> tuple[MoveSystem, VertexSet]:
    doc = json.loads(text)
    try:
        classes = doc["moves"]
        assignment = doc["assignment"]
        start = doc["start"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"system JSON is missing a field: {exc}") from None
    n = len(assignment)
    masks = [VertexSet.of(n, c) for c in classes]
    for k in assignment:
        if not 0 <= k < len(masks):
            raise ValueError(f"assignment index {k} out of range")
    used = sorted(set(assignment))
    ms = MoveSystem(tuple(masks[k] for k in assignment), tuple(masks[k] for k in used))
    return ms, VertexSet.of(n, start)


def orbit_dump_lines(g: Graph, orbit: Orbit) -> Iterator[str]:
    full = g.full_mask
    for c, s in orbit.masks_in_range(0, orbit.size):
        legal = connected_mask(g.adj, s) and connected_mask(g.adj, full ^ s)
        yield json.dumps(
            {
                "coords": coords_to_bitstring(c, orbit.rank),
                "state": list(iter_bits(s)),
                "legal": legal,
            }
        )


__all__ = [
    "Admissibility",
    "DEFAULT_ORBIT_CAP",
    "Direction",
    "MoveSystem",
    "MoveViolation",
    "Orbit",
    "OrbitTooLarge",
    "bitstring_to_coords",
    "coords_to_bitstring",
    "edge_direction",
    "enumerate_orbit",
    "f2_basis",
    "gray_sequence",
    "is_admissible",
    "is_legal_state",
    "mask_of",
    "orbit_dump_lines",
    "search_starting_state",
    "system_from_json",
    "system_to_json",
    "validate_move_system",
]
