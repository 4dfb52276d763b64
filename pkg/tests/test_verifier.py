import json
import random

import pytest

from racgfib._kernel import LINK_WIDTH, orbit_block
from racgfib.graph import VertexSet, build_graph
from racgfib.moves import MoveSystem, enumerate_orbit, validate_move_system
from racgfib.verifier import (
    MODE_CONDITIONS_AB,
    MODE_LEMMA31,
    CacheCorrupt,
    LinkReport,
    _side_from_row,
    analyze_state,
    orbit_reports,
    sorted_cache_lines,
    sweep,
    verify_f1,
    verify_not_fp2,
)


def test_analyze_state_examples(cell24, cell600):
    g, ms, s0, lab = cell24
    rep = analyze_state(g, lab.ids((3, 5, 7, 8, 9, 10, 11, 13, 17, 18, 19, 20)))
    assert rep.desc.f == (12, 24, 12, 0) and rep.desc.betti[:3] == (1, 1, 0) and rep.legal
    g6, _, _, s6 = cell600
    rep6 = analyze_state(g6, s6)
    assert rep6.desc.f == (60, 150, 75, 0)
    assert rep6.desc.betti == (1, 16, 0, 0) and rep6.desc.euler == -15
    assert not any(rep6.desc.torsion)


def test_report_line_round_trip(cell24):
    g, ms, s0, _ = cell24
    rep = analyze_state(g, s0, "000")
    doc = json.loads(rep.to_line())
    assert set(doc) == {"coords", "legal", "desc", "asc"}
    assert set(doc["desc"]) == {"f", "betti", "torsion"}
    assert LinkReport.from_line(rep.to_line()) == rep


def test_complement_duality_24cell(cell24):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    reps = orbit_reports(g, orbit)
    for c, rep in enumerate(reps):
        other = reps[c ^ 0b111]
        assert rep.asc == other.desc and rep.desc == other.asc
        assert rep.desc.euler == rep.desc.betti_euler
        assert rep.asc.euler == rep.asc.betti_euler


def test_complement_duality_600cell_sampled(cell600):
    g, _, ms, s0 = cell600
    orbit = enumerate_orbit(ms, s0)
    full = orbit.size - 1
    assert orbit.state_mask(full) == g.full_mask ^ s0.bits
    rng = random.Random(4)
    for c in rng.sample(range(orbit.size), 10_000):
        a = orbit_block(g, orbit, c, c + 1)[0]
        b = orbit_block(g, orbit, c ^ full, (c ^ full) + 1)[0]
        assert (a[:LINK_WIDTH] == b[LINK_WIDTH:]).all() and (a[LINK_WIDTH:] == b[:LINK_WIDTH]).all()
        for side in (_side_from_row(a[:LINK_WIDTH]), _side_from_row(a[LINK_WIDTH:])):
            assert side.euler == side.betti_euler
    for c in rng.sample(range(orbit.size), 200):
        exact = analyze_state(g, orbit.state_mask(c))
        row = orbit_block(g, orbit, c, c + 1)[0]
        assert _side_from_row(row[:LINK_WIDTH]).betti == exact.desc.betti
        assert _side_from_row(row[LINK_WIDTH:]).betti == exact.asc.betti


def p4_bad():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    return g, MoveSystem.from_classes(4, [[0], [1], [2], [3]]), VertexSet.of(4, [0, 2])


def test_verify_f1(cell24):
    g, ms, s0, _ = cell24
    res = verify_f1(g, ms, s0)
    assert res.f1_fibering and res.all_links_connected and res.states == 8
    bad = verify_f1(*p4_bad())
    assert not bad.f1_fibering and bad.first_illegal == "0000"


def test_sweep_24cell_certificate(cell24):
    g, ms, s0, _ = cell24
    cert = verify_not_fp2(g, ms, s0, MODE_LEMMA31, system_id="cell24")
    assert cert.admissible and cert.f1_fibering == cert.admissible
    assert cert.all_links_connected and cert.all_links_h2_zero and cert.all_links_torsion_free
    assert cert.lemma31_holds and cert.conditions_ab_hold and cert.holds
    assert cert.h1_nonzero_count == 8 and cert.chi_consistent
    assert cert.evidence_digest["reports"] == 8


def test_sweep_failure_has_witness():
    cert = sweep(*p4_bad(), mode=MODE_CONDITIONS_AB)
    assert not cert.holds and not cert.f1_fibering
    assert cert.witness == "illegal state at coords 0000"
    invalid = MoveSystem((VertexSet.of(3, [0, 1]),) * 3)
    g3 = build_graph(3, [(0, 1), (1, 2)])
    assert validate_move_system(g3, invalid)
    cert = sweep(g3, invalid, VertexSet.of(3, [0]))
    assert not cert.valid_move_system and "move axiom" in cert.witness


def test_lemma_implies_conditions(cell24, coarse600):
    for g, ms, s0 in (cell24[:3], coarse600):
        cert = sweep(g, ms, s0, mode=MODE_LEMMA31)
        assert not cert.lemma31_holds or cert.conditions_ab_hold


def test_sweep_cache_resume_and_determinism(tmp_path, coarse600):
    g, ms, s0 = coarse600
    c1 = tmp_path / "a.jsonl"
    cert1 = sweep(g, ms, s0, workers=1, cache=str(c1), chunk=256)
    assert cert1.holds and cert1.states == 2048
    # workers=3, fresh cache
    c3 = tmp_path / "b.jsonl"
    cert3 = sweep(g, ms, s0, workers=3, cache=str(c3), chunk=256)
    assert cert3.to_json() == cert1.to_json()
    assert sorted_cache_lines(str(c1)) == sorted_cache_lines(str(c3))
    # complete cache: nothing recomputed
    size = c1.stat().st_size
    again = sweep(g, ms, s0, workers=2, cache=str(c1), chunk=256)
    assert again.to_json() == cert1.to_json() and c1.stat().st_size == size
    # interrupted run: half the lines plus a torn final line
    lines = c1.read_text().splitlines(keepends=True)
    c2 = tmp_path / "c.jsonl"
    c2.write_text("".join(lines[:1000]) + lines[1000][:37])
    resumed = sweep(g, ms, s0, workers=2, cache=str(c2), chunk=256)
    assert resumed.to_json() == cert1.to_json()
    assert sorted_cache_lines(str(c2)) == sorted_cache_lines(str(c1))


def test_corrupt_cache_reports_line(tmp_path, cell24):
    g, ms, s0, _ = cell24
    cache = tmp_path / "e.jsonl"
    sweep(g, ms, s0, cache=str(cache))
    lines = cache.read_text().splitlines()
    lines[3] = '{"coords": "01", "legal": true}'
    cache.write_text("\n".join(lines) + "\n")
    with pytest.raises(CacheCorrupt, match=r"e\.jsonl:4:"):
        sweep(g, ms, s0, cache=str(cache))
