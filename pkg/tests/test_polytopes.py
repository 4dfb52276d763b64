import json

import pytest

from racgfib.complex import flag_complex, full_subcomplex
from racgfib.graph import Bipartition, bipartition_classes, is_isomorphic
from racgfib.homology import homology_summary
from racgfib.moves import enumerate_orbit, is_admissible, validate_move_system
from racgfib.polytopes import (
    CELL24_H1_RANKS,
    CELL24_PROFILE,
    DIAG_BOTH,
    LABEL_NAMES,
    PUBLISHED_M1,
    PUBLISHED_M2,
    PUBLISHED_M3,
    PHASES,
    SKIP_EVEN_HORIZONTAL,
    SKIP_EVEN_VERTICAL,
    PUBLISHED_H1_RANKS,
    GridVariant,
    LabelingObstruction,
    assign_600cell_labels,
    build_24cell_skeleton,
    build_600cell_grid,
    build_hypercube,
    cell600_coordinates,
    cell600_system,
    check_euler_target,
    grid_variants,
    orbit_euler_sum,
    phase_legal_prefix,
    recover_24cell_labeling,
    start_state_600,
    verify_600cell,
)
from racgfib.quadratic import PHI


@pytest.mark.parametrize("d,n,e", [(1, 2, 1), (3, 8, 12), (4, 16, 32)])
def test_hypercube(d, n, e):
    g = build_hypercube(d)
    assert (g.n, g.edge_count) == (n, e)
    assert set(g.degrees()) == {d}
    bp = bipartition_classes(g)
    assert isinstance(bp, Bipartition) and {len(c) for c in bp.classes} == {n // 2}


def test_24cell_skeleton():
    g, apexes = build_24cell_skeleton()
    assert (g.n, g.edge_count) == (24, 96)
    assert set(g.degrees()) == {8}
    assert not any(g.adj[a] & apexes.bits for a in apexes)
    assert flag_complex(g).face_vector().counts == (24, 96, 96, 0)


def test_coordinate_model(coord600):
    pts = cell600_coordinates()
    assert len(pts) == 120
    assert all(sum((x * x for x in p), start=0 * PHI) == 1 for p in pts)
    assert (coord600.n, coord600.edge_count) == (120, 720)
    assert verify_600cell(coord600) == []


def test_grid_variants_pass_iff_isomorphic(coord600):
    passing = []
    for v in grid_variants():
        g, _ = build_600cell_grid(v)
        assert g.n == 120
        defects = verify_600cell(g, check_isomorphism=False)
        if g.edge_count == 720:
            iso = is_isomorphic(g, coord600) is not None
            assert (not defects) == iso, v.name
        else:
            assert defects
        if not defects:
            passing.append(v)
    assert GridVariant() in passing
    assert all(v.skip == SKIP_EVEN_VERTICAL and v.diagonals == DIAG_BOTH for v in passing)
    flipped, _ = build_600cell_grid(GridVariant(0, SKIP_EVEN_HORIZONTAL, DIAG_BOTH))
    assert flipped.edge_count == 720 and set(flipped.degrees()) == {12}
    assert any("face vector" in d or "icosahedron" in d for d in verify_600cell(flipped))


def test_grid_degrees():
    g, gl = build_600cell_grid()
    assert set(g.degrees()) == {12}
    assert len(set(gl.ordinary.values()) | set(gl.even_hovering) | set(gl.odd_hovering)) == 120


def test_label_scan():
    g, gl = build_600cell_grid()
    independent = [k for k in range(10) if not isinstance(assign_600cell_labels(g, gl, k), list)]
    assert independent == [2, 3, 4, 6, 7, 8]
    bad = assign_600cell_labels(g, gl, 0)
    assert isinstance(bad, list) and bad[0].name == "0"
    lab = assign_600cell_labels(g, gl, 3)
    sizes = sorted(len(c) for c in lab.classes().values())
    assert sizes == [2] * 10 + [10] * 10
    assert lab.label[100:110] == ("0'", "2'", "4'", "6'", "8'") * 2
    assert lab.label[110:120] == ("1'", "3'", "5'", "7'", "9'") * 2
    doc = json.loads(lab.to_json())
    assert len(doc["ordinary"]) == 100 and doc["ordinary"][12] == [1, 2, 12]
    assert len(doc["label"]) == 120


def test_admissible_multipliers_prefix_scan():
    # only 3 and 7 survive a legality scan over the first 2^14 orbit states
    g, gl = build_600cell_grid()
    survivors = []
    for k in (2, 3, 4, 6, 7, 8):
        _, _, ms, s0 = cell600_system(k=k)
        if phase_legal_prefix(g, ms, s0, 1 << 14) is None:
            survivors.append(k)
    assert survivors == [3, 7]


def test_start_state_phases(cell600):
    g, _, ms, _ = cell600
    for phase in PHASES:
        s = start_state_600(phase)
        assert len(s) == 60
    assert full_subcomplex(g, start_state_600()).face_vector().counts == (60, 150, 75, 0)


def test_600cell_system_valid(cell600):
    g, lab, ms, s0 = cell600
    assert validate_move_system(g, ms) == []
    assert [lab.label[next(iter(m))] for m in ms.distinct_moves] == list(LABEL_NAMES)


def test_600cell_admissible_exhaustive(cell600):
    g, _, ms, s0 = cell600
    adm = is_admissible(g, ms, s0)
    assert adm.admissible and adm.checked == 1 << 20


def test_euler_obstruction_for_published_table(cell24):
    g, ms, _, _ = cell24
    assert orbit_euler_sum(g, ms) == 0
    with pytest.raises(LabelingObstruction):
        check_euler_target(g, ms, PUBLISHED_H1_RANKS)
    check_euler_target(g, ms, CELL24_H1_RANKS)
    with pytest.raises(LabelingObstruction):
        recover_24cell_labeling(PUBLISHED_H1_RANKS)


def test_orbit_euler_sum_matches_direct_sum(cell24, cell600):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    direct = sum(full_subcomplex(g, orbit.state_mask(c)).face_vector().euler for c in range(8))
    assert direct == orbit_euler_sum(g, ms)


def test_recovery_reproduces_builtin_profile(cell24):
    lab = recover_24cell_labeling(CELL24_H1_RANKS)
    assert lab.profile == CELL24_PROFILE
    g, ms, s0, builtin = cell24
    assert lab.to_id == builtin.to_id and lab.start == s0
    assert sorted(lab.to_id) == list(range(1, 25)) and sorted(lab.to_id.values()) == list(range(24))
    bp = bipartition_classes(g.induced(0xFFFF))
    classes = {c.bits for c in bp.classes}
    assert lab.ids(PUBLISHED_M1).bits in classes and lab.ids(PUBLISHED_M2).bits in classes
    assert lab.ids(PUBLISHED_M3).bits == 0xFF << 16


def test_builtin_24cell_links(cell24):
    g, ms, s0, _ = cell24
    orbit = enumerate_orbit(ms, s0)
    for c in range(8):
        for s in (orbit.state_mask(c), g.full_mask ^ orbit.state_mask(c)):
            h = homology_summary(full_subcomplex(g, s), 2)
            assert h.betti == (1, 1, 0) and h.torsion_free
