import itertools
import json
import random

import pytest

from racgfib.graph import VertexSet, build_graph, connected_mask
from racgfib.moves import (
    Direction,
    MoveSystem,
    OrbitTooLarge,
    bitstring_to_coords,
    coords_to_bitstring,
    edge_direction,
    enumerate_orbit,
    gray_sequence,
    is_admissible,
    is_legal_state,
    orbit_dump_lines,
    search_starting_state,
    system_from_json,
    system_to_json,
    validate_move_system,
)
from racgfib.polytopes import PUBLISHED_ORBIT


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def singletons(n):
    return MoveSystem.from_classes(n, [[v] for v in range(n)])


def test_legal_state_examples(cell24):
    g = path(3)
    assert is_legal_state(g, VertexSet.of(3, [0]))
    assert not is_legal_state(g, VertexSet.of(3, [0, 2]))
    g24, _, _, lab = cell24
    assert is_legal_state(g24, lab.ids([1, 2, 4, 6, 12, 14, 15, 16, 17, 18, 19, 20]))


def test_validate_move_system_examples(cell24):
    g = path(3)
    assert validate_move_system(g, MoveSystem.from_classes(3, [[0, 2], [1]])) == []
    moves = (VertexSet.of(3, [0]), VertexSet.of(3, [0, 1]), VertexSet.of(3, [2]))
    bad = validate_move_system(g, MoveSystem(moves))
    assert [(v.vertex, v.prop, v.witness) for v in bad] == [(1, 2, 0)]
    missing = validate_move_system(g, MoveSystem((VertexSet.of(3, [1]),) * 3))
    assert (0, 1, 0) in [(v.vertex, v.prop, v.witness) for v in missing]
    g24, ms, _, _ = cell24
    assert validate_move_system(g24, ms) == []


def test_single_full_move_orbit():
    g = path(4)
    ms = MoveSystem((VertexSet.full(4),) * 4)
    s0 = VertexSet.of(4, [0, 1])
    orbit = enumerate_orbit(ms, s0)
    assert orbit.rank == 1
    assert {s for _, s in orbit} == {s0, VertexSet.of(4, [2, 3])}


def test_24cell_orbit_matches_published_list(cell24):
    g, ms, s0, lab = cell24
    orbit = enumerate_orbit(ms, s0)
    assert orbit.size == 8
    for bits, labels in PUBLISHED_ORBIT.items():
        assert orbit.state(bitstring_to_coords(bits, 3)) == lab.ids(labels)


def test_600cell_orbit_rank(cell600):
    _, _, ms, s0 = cell600
    orbit = enumerate_orbit(ms, s0)
    assert orbit.rank == 20 and orbit.size == 1 << 20
    with pytest.raises(OrbitTooLarge):
        enumerate_orbit(ms, s0, cap=1 << 19)


def test_orbit_closure_and_coords(cell24, cell600):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    states = {orbit.state_mask(c) for c in range(orbit.size)}
    for s in states:
        for m in ms.distinct_moves:
            assert s ^ m.bits in states
    _, _, ms6, s6 = cell600
    orbit6 = enumerate_orbit(ms6, s6)
    rng = random.Random(5)
    for _ in range(10_000):
        c = rng.randrange(orbit6.size)
        i = rng.randrange(orbit6.rank)
        moved = orbit6.state_mask(c) ^ orbit6.generators[i]
        assert orbit6.coords_of(moved) == c ^ (1 << i)
    assert orbit6.coords_of(VertexSet.of(120, [0])) is None


def test_two_cube_consistency(cell24, cell600):
    # u in s  <=>  u in s ^ m_v  for every edge {u, v}
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    for c in range(orbit.size):
        s = orbit.state_mask(c)
        for u, v in g.edges():
            for a, b in ((u, v), (v, u)):
                assert (s >> a & 1) == ((s ^ ms.moves[b].bits) >> a & 1)
    g6, _, ms6, s6 = cell600
    orbit6 = enumerate_orbit(ms6, s6)
    edges = g6.edges()
    rng = random.Random(7)
    for _ in range(100_000):
        s = orbit6.state_mask(rng.randrange(orbit6.size))
        u, v = edges[rng.randrange(len(edges))]
        assert (s >> u & 1) == ((s ^ ms6.moves[v].bits) >> u & 1)


def test_gray_order_and_state_sizes(cell24, cell600):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    prev = None
    for coords, s in orbit:
        assert len(s) == 12
        if prev is not None:
            diff = (prev ^ s).bits
            assert any(diff == m for m in orbit.generators)
        prev = s
    seq = [c for c, _ in gray_sequence(5)]
    assert sorted(seq) == list(range(32))
    assert all(bin(a ^ b).count("1") == 1 for a, b in zip(seq, seq[1:]))
    _, _, ms6, s6 = cell600
    orbit6 = enumerate_orbit(ms6, s6)
    rng = random.Random(2)
    assert all(len(orbit6.state(rng.randrange(orbit6.size))) == 60 for _ in range(2000))


def test_admissibility_examples(cell24):
    g, ms, s0, _ = cell24
    adm = is_admissible(g, ms, s0)
    assert adm.admissible and adm.checked == 8
    p4 = path(4)
    bad = is_admissible(p4, singletons(4), VertexSet.of(4, [0, 2]))
    assert not bad.admissible and bad.first_illegal == "0000"


def test_admissibility_is_orbit_invariant(cell24):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    for c in range(orbit.size):
        assert is_admissible(g, ms, orbit.state(c)).admissible
    p4 = path(4)
    ms4 = MoveSystem.from_classes(4, [[0, 2], [1, 3]])
    for bits in range(16):
        s = VertexSet(4, bits)
        verdicts = {is_admissible(p4, ms4, t).admissible for _, t in enumerate_orbit(ms4, s)}
        assert len(verdicts) == 1


def test_first_illegal_is_lexicographically_least():
    g = path(4)
    ms = singletons(4)
    s0 = VertexSet.of(4, [0, 1])
    adm = is_admissible(g, ms, s0)
    orbit = enumerate_orbit(ms, s0)
    illegal = [
        coords_to_bitstring(c, 4)
        for c in range(16)
        if not is_legal_state(g, orbit.state(c))
    ]
    assert adm.first_illegal == min(illegal) and adm.illegal_count == len(illegal)


def test_edge_direction(cell24):
    _, _, s0, lab = cell24
    assert edge_direction(s0, lab.to_id[17]) is Direction.OUTGOING
    assert edge_direction(s0, lab.to_id[3]) is Direction.INCOMING
    m = VertexSet.of(24, [lab.to_id[17], 0])
    assert edge_direction(s0 ^ m, lab.to_id[17]) is Direction.INCOMING


def test_search_starting_state_brute_force_p3():
    g = path(3)
    ms = singletons(3)
    cands = [VertexSet(3, b) for b in range(8)]
    found = search_starting_state(g, ms, cands)
    # hand check: every state's orbit is all of 2^V, which contains the empty set
    assert found == []
    ms2 = MoveSystem((VertexSet.full(3),) * 3)
    found2 = search_starting_state(g, ms2, cands)
    expected = [s for s in cands if is_legal_state(g, s) and is_legal_state(g, ~s)]
    assert found2 == expected
    assert [s.to_list() for s in found2] == [[0], [0, 1], [2], [1, 2]]


def test_system_json_round_trip(cell24):
    g, ms, s0, _ = cell24
    text = system_to_json(ms, s0)
    doc = json.loads(text)
    assert set(doc) == {"moves", "assignment", "start"} and len(doc["assignment"]) == 24
    ms2, s2 = system_from_json(text)
    assert ms2 == ms and s2 == s0
    assert [m.bits for m in ms2.distinct_moves] == [m.bits for m in ms.distinct_moves]
    with pytest.raises(ValueError):
        system_from_json('{"moves": []}')


def test_orbit_dump(cell24):
    g, ms, s0, _ = cell24
    lines = list(orbit_dump_lines(g, enumerate_orbit(ms, s0)))
    docs = [json.loads(x) for x in lines]
    assert [d["coords"] for d in docs] == ["".join(p)[::-1] for p in itertools.product("01", repeat=3)]
    assert all(d["legal"] for d in docs) and docs[0]["state"] == s0.to_list()
