"""Walk through the 24-cell system: moves, orbit, and link homology.

Run with ``python3 demos/cell24_walkthrough.py``.
"""

from racgfib.moves import bitstring_to_coords, enumerate_orbit, is_admissible
from racgfib.polytopes import COORD_ORDER, cell24_system, orbit_euler_sum
from racgfib.verifier import analyze_state


def main():
    g, ms, s0, lab = cell24_system()
    print(f"24-cell skeleton: {g.n} vertices, {g.edge_count} edges")
    label = lab.to_label()
    for i, m in enumerate(ms.distinct_moves, 1):
        print(f"  m{i} = {sorted(label[v] for v in m)}")
    print(f"  S  = {sorted(label[v] for v in s0)}")

    orbit = enumerate_orbit(ms, s0)
    print(f"orbit size {orbit.size}, admissible: {is_admissible(g, ms, s0).admissible}")

    # each state with its descending and ascending link
    print("coords  desc f-vector   betti      asc betti")
    for b in COORD_ORDER:
        rep = analyze_state(g, orbit.state_mask(bitstring_to_coords(b, 3)), b)
        d, a = rep.desc, rep.asc
        print(f"  {b}   {d.f}  {d.betti[:3]}  {a.betti[:3]}")

    # why the published H1 ranks cannot all occur at once
    print("sum of link Euler characteristics over the orbit:", orbit_euler_sum(g, ms))


if __name__ == "__main__":
    main()
