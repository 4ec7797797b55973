import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQUARE, TRIANGLE, gp_instance
from oracles import oracle_delaunay_edges
from polycolor.delaunay import (
    EmbeddingError,
    _segment_enters,
    build_dt,
    check_dt_properties,
    crossing_pairs,
    is_connected,
    plane_graph,
    segments_conflict,
    walk_faces,
)
from polycolor.geometry import ConvexPolygon, Homothet, PointSet, segment_meets_homothet, waive_general_position
from polycolor.ranges import RangeSpace, range_space

BIG_SQUARE = ((-1, -1), (1, -1), (1, 1), (-1, 1))


def _three():
    D = ConvexPolygon(BIG_SQUARE)
    return D, waive_general_position(D, PointSet([(0, 0), (2, 0), (1, 1)]))


def test_three_points_give_one_triangle():
    D, S = _three()
    G = build_dt(D, S)
    assert G.edges == ((0, 1), (0, 2), (1, 2))
    assert G.inner_faces() == [(0, 1, 2)]
    assert len(G.faces) == 2
    assert check_dt_properties(G, D, S).ok


def test_one_and_two_points():
    D = ConvexPolygon(SQUARE)
    G1 = build_dt(D, waive_general_position(D, PointSet([(5, 5)])))
    assert G1.n == 1 and G1.edges == ()
    S2 = waive_general_position(D, PointSet([(0, 0), (7, 3)]))
    G2 = build_dt(D, S2)
    assert G2.edges == ((0, 1),)
    assert check_dt_properties(G2, D, S2).ok


def test_hand_built_crossing_fails_planarity():
    D = ConvexPolygon(SQUARE)
    pts = [(0, 0), (10, 1), (11, 10), (1, 11)]
    S = waive_general_position(D, PointSet(pts))
    G = plane_graph(pts, [(0, 2), (1, 3), (0, 1), (1, 2), (2, 3), (3, 0)])
    assert crossing_pairs(G) == [((0, 2), (1, 3))]
    rep = check_dt_properties(G, D, S)
    assert not rep.ok and "crossing" in rep.summary()


def test_build_dt_refuses_crossings():
    # a range engine that reports a crossing pair is an internal bug
    D = ConvexPolygon(SQUARE)
    pts = [(0, 0), (10, 1), (11, 10), (1, 11)]
    S = waive_general_position(D, PointSet(pts))
    space = range_space(D, S)
    bad = type("FakeSpace", (), {"masks": [0b0101, 0b1010]})()
    with pytest.raises(EmbeddingError):
        build_dt(D, S, bad)
    assert build_dt(D, S, space).edges


def test_segments_conflict_cases():
    a, b = (0, 0), (4, 0)
    assert segments_conflict(a, b, (2, -1), (2, 1))
    assert not segments_conflict(a, b, (4, 0), (5, 3))  # shared endpoint only
    assert segments_conflict(a, b, (4, 0), (2, 0))  # collinear overlap at the shared end
    assert not segments_conflict(a, b, (4, 0), (6, 0))
    assert segments_conflict(a, b, (2, 0), (2, 5))  # T-junction
    assert segments_conflict(a, b, b, a)


def test_face_walk_of_a_square_with_diagonal():
    pts = [(0, 0), (2, 0), (2, 2), (0, 2)]
    G = plane_graph(pts, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    inner = sorted(tuple(sorted(f)) for f in G.inner_faces())
    assert inner == [(0, 1, 2), (0, 2, 3)]
    assert sorted(G.faces[G.outer]) == [0, 1, 2, 3]
    # Euler: V - E + F = 2
    assert G.n - len(G.edges) + len(G.faces) == 2


def test_tree_faces():
    G = plane_graph([(0, 0), (1, 0), (0, 1)], [(0, 1), (0, 2)])
    assert len(G.faces) == 1 and G.outer == 0
    assert walk_faces(((), ())) == []


def test_is_connected_on_masks():
    G = plane_graph([(0, 0), (1, 0), (2, 1), (5, 5)], [(0, 1), (1, 2)])
    assert not is_connected(G)
    assert is_connected(G, 0b0111)
    assert not is_connected(G, 0b0101)
    assert is_connected(G, 0)


@pytest.mark.parametrize("seed", range(4))
def test_edges_match_oracle(seed):
    poly = TRIANGLE if seed % 2 else SQUARE
    D, S, pts = gp_instance(poly, 7, 900 + seed, 0, 1000)
    assert set(build_dt(D, S).edges) == oracle_delaunay_edges(poly, pts)


@pytest.mark.parametrize("seed", range(5))
def test_structural_checks_pass(seed):
    poly = [SQUARE, TRIANGLE, [(0, 0), (5, 1), (6, 4), (1, 3)]][seed % 3]
    D, S, _ = gp_instance(poly, 20, 40 + seed)
    G = build_dt(D, S)
    rep = check_dt_properties(G, D, S)
    assert rep.ok, rep.summary()
    assert len(G.edges) <= 3 * G.n - 6


def test_relabeling_permutes_edges():
    D, S, pts = gp_instance(SQUARE, 12, 8)
    perm = list(range(12))
    random.Random(1).shuffle(perm)
    # new index j holds old point perm[j]
    T = waive_general_position(D, PointSet([pts[perm[j]] for j in range(12)]))
    old = {frozenset(e) for e in build_dt(D, S).edges}
    new = {frozenset(perm[u] for u in e) for e in build_dt(D, T).edges}
    assert old == new


def test_injected_split_violation_is_reported():
    # a fake witness for a range that an edge passes through is caught
    D, S, _ = gp_instance(SQUARE, 10, 3)
    space = range_space(D, S)
    G = build_dt(D, S, space)
    assert check_dt_properties(G, D, S, space).ok
    fake = RangeSpace(D, S)
    # every range now claims a witness that swallows the whole plane region
    fake.witness_scaled = lambda mask: (0, 0, 10**12, 1)
    rep = check_dt_properties(G, D, S, fake)
    assert rep.split_violations and not rep.ok


coords = st.integers(-40, 40)


@settings(max_examples=300, deadline=None)
@given(coords, coords, st.integers(1, 30), coords, coords, coords, coords)
def test_integer_segment_test_matches_fraction_version(cx, cy, s, ax, ay, bx, by):
    D = ConvexPolygon([(0, 0), (3, 0), (1, 2)])
    h = Homothet((cx, cy), s)
    # slack of a point p: n.(p - c) - s b, linear along the segment
    def slacks(p):
        return [nx * (p[0] - cx) + ny * (p[1] - cy) - s * b for nx, ny, b in D.edges]

    a, z = (ax, ay), (bx, by)
    start, end = slacks(a), slacks(z)
    den = 1
    for v in start + end:
        den = den * Fraction(v).denominator
    start = [int(v * den) for v in start]
    end = [int(v * den) for v in end]
    assert _segment_enters(start, end) == segment_meets_homothet(D, h, a, z)
