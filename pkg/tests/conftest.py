import random

import pytest

from polycolor.geometry import ConvexPolygon, PointSet, general_position_check, verify_general_position

SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))
TRIANGLE = ((-1, -1), (2, -1), (-1, 2))

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES: dict = {}


def gp_instance(poly, n, seed, lo=0, hi=10**6):
    """A seeded random n-point set in general position for the polygon."""
    from oracles import random_points

    D = ConvexPolygon(poly)
    rng = random.Random(seed)
    while True:
        pts = random_points(rng, n, lo, hi)
        S = PointSet(pts)
        if general_position_check(D, S).ok:
            return D, verify_general_position(D, S), pts


@pytest.fixture
def square():
    return ConvexPolygon(SQUARE)


@pytest.fixture
def triangle():
    return ConvexPolygon(TRIANGLE)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
