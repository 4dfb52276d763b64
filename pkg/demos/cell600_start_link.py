"""The 600-cell system and the descending link of its start state.

Run with ``python3 demos/cell600_start_link.py``.
"""

from racgfib.complex import full_subcomplex
from racgfib.homology import homology_summary
from racgfib.polytopes import build_600cell_coordinate, cell600_system, verify_600cell


def main():
    g, lab, ms, s0 = cell600_system()
    print(f"grid model: {g.n} vertices, {g.edge_count} edges, {len(ms.distinct_moves)} moves")
    defects = verify_600cell(g)
    print("isomorphic to the coordinate model:", not defects)

    K = full_subcomplex(g, s0, 3)
    h = homology_summary(K, 3)
    print(f"start state has {len(s0)} vertices")
    print(f"descending link: f = {K.face_vector().counts}, chi = {K.face_vector().euler}")
    print(f"  betti {h.betti}, torsion-free {h.torsion_free}")

    coord = build_600cell_coordinate()
    print(f"coordinate model: {coord.n} vertices, {coord.edge_count} edges")


if __name__ == "__main__":
    main()
