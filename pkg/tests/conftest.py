import pytest

from racgfib.polytopes import build_600cell_coordinate, cell24_system, cell600_system


@pytest.fixture(scope="session")
def cell24():
    return cell24_system()


@pytest.fixture(scope="session")
def cell600():
    return cell600_system()


@pytest.fixture(scope="session")
def coord600():
    return build_600cell_coordinate()


@pytest.fixture(scope="session")
def coarse600(cell600):
    """600-cell with merged label classes: a 2^11-state sub-orbit of the full system."""
    from racgfib.moves import MoveSystem

    g, lab, _, s0 = cell600
    cls = lab.classes()
    groups = [[str(i), str(i + 5)] for i in range(5)]
    groups += [["0'", "4'"], ["2'", "6'"], ["8'"], ["1'", "5'"], ["3'", "7'"], ["9'"]]
    ms = MoveSystem.from_classes(120, [[v for name in grp for v in cls[name]] for grp in groups])
    return g, ms, s0
