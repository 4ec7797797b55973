import itertools
import random
from fractions import Fraction

import pytest

from oracles import N_recursion, brute_force_avoiding, edge_count_recursion
from polycolor.lowerbound import (
    Ball3,
    Hextant,
    Point3,
    Rect,
    SearchTooLarge,
    build_H,
    check_unavoidable,
    child_eps,
    dist2,
    hextant_embed,
    hextant_range_check,
    hextant_to_rect,
    realize_unit_balls,
    realize_verified,
    rect_to_hextant,
    verify_realization,
    vertex_count,
)

SMALL = [p for p in itertools.product(range(1, 7), repeat=3) if sum(p) <= 8]


def test_base_case():
    # [PAPER] base case: a single vertex, in one edge of each family
    H = build_H(1, 1, 1)
    assert H.n_vertices == 1
    assert H.E1 == H.E2 == H.E3 == (frozenset({0}),)


@pytest.mark.parametrize("klm, n", [((1, 1, 1), 1), ((2, 1, 1), 2), ((1, 2, 2), 5), ((2, 2, 2), 16)])
def test_vertex_goldens(klm, n):
    # [DERIVED] frozen after evaluating the recursion in oracles.N_recursion
    assert N_recursion(*klm) == n
    assert build_H(*klm).n_vertices == n == vertex_count(*klm)


def test_edge_goldens():
    H = build_H(2, 2, 2)
    assert [len(H.E1), len(H.E2), len(H.E3)] == [11, 11, 11]
    assert [edge_count_recursion(2, 2, 2, i) for i in range(3)] == [11, 11, 11]
    assert [len(f) for f in build_H(1, 2, 2).families] == [5, 3, 3]


@pytest.mark.parametrize("klm", SMALL)
def test_counts_and_edge_sizes(klm):
    H = build_H(*klm)
    assert H.n_vertices == N_recursion(*klm)
    for i in range(3):
        assert len(H.families[i]) == edge_count_recursion(*klm, i)
        assert all(len(e) == klm[i] for e in H.families[i])
        assert all(0 <= v < H.n_vertices for e in H.families[i] for v in e)


def test_bad_parameters():
    for bad in [(0, 1, 1), (1, -1, 2), (1, 1, 1.5)]:
        with pytest.raises(ValueError):
            build_H(*bad)


@pytest.mark.parametrize("klm", [p for p in SMALL if sum(p) <= 6])
def test_unavoidable_small(klm):
    assert check_unavoidable(build_H(*klm)).unavoidable


@pytest.mark.parametrize("klm", [p for p in SMALL if N_recursion(*p) <= 8])
def test_search_matches_brute_force(klm):
    H = build_H(*klm)
    assert brute_force_avoiding(H.n_vertices, H.families) is None
    for i, fam in enumerate(H.families):
        for j in range(len(fam)):
            G = H.without_edge(i, j)
            v = check_unavoidable(G)
            brute = brute_force_avoiding(G.n_vertices, G.families)
            assert v.unavoidable == (brute is None)
            if not v.unavoidable:
                # the witness really avoids every edge
                assert all(not all(v.coloring[x] == f for x in e) for f, e in G.edges())


def test_deleting_any_edge_of_the_base_case():
    H = build_H(1, 1, 1)
    for i in range(3):
        v = check_unavoidable(H.without_edge(i, 0))
        assert not v.unavoidable and v.coloring == (i,)
        assert "avoidable" in v.describe()


def test_guard():
    with pytest.raises(SearchTooLarge):
        check_unavoidable(build_H(2, 2, 2), guard=10)
    with pytest.raises(SearchTooLarge):
        check_unavoidable(build_H(2, 2, 3))


@pytest.mark.slow
def test_two_two_two_is_unavoidable_but_not_robustly():
    H = build_H(2, 2, 2)
    assert check_unavoidable(H).unavoidable
    v = check_unavoidable(H.without_edge(0, 0))
    assert not v.unavoidable
    assert all(not all(v.coloring[x] == f for x in e) for f, e in H.without_edge(0, 0).edges())


def test_child_eps():
    assert child_eps(Fraction(1, 8)) == Fraction(1, 8 ** 5)


def test_base_realization():
    r = realize_unit_balls(1, 1, 1)
    assert r.points == [Point3(0, 0, 0)]
    assert len(r.balls) == 3
    for b in r.balls:
        assert dist2(r.points[0], b.center) < 1
    assert verify_realization(r.points, r.balls, build_H(1, 1, 1)).ok


@pytest.mark.parametrize("klm", [p for p in SMALL if max(p) <= 2])
def test_realizations_verify(klm):
    real, verdict, halvings = realize_verified(*klm)
    assert verdict.ok and verdict.min_margin > 0 and halvings == 0
    H = build_H(*klm)
    assert len(real.points) == H.n_vertices
    assert len(real.balls) == sum(len(f) for f in H.families)


def test_two_two_two_sizes():
    real = realize_unit_balls(2, 2, 2)
    assert len(real.points) == 16 and len(real.balls) == 33


def test_moved_ball_is_caught():
    real = realize_unit_balls(2, 1, 1)
    H = build_H(2, 1, 1)
    balls = list(real.balls)
    c = balls[0].center
    balls[0] = Ball3(Point3(c.x + 1, c.y, c.z))
    verdict = verify_realization(real.points, balls, H)
    assert not verdict.ok and verdict.violations
    assert "E1[0]" in verdict.describe()


def test_size_mismatch_is_an_error():
    real = realize_unit_balls(1, 1, 1)
    with pytest.raises(ValueError):
        verify_realization(real.points, real.balls[:2], build_H(1, 1, 1))


def test_bad_eps():
    with pytest.raises(ValueError):
        realize_unit_balls(1, 1, 1, eps=1)


def test_hextant_embedding():
    assert hextant_embed([(1, 2)]) == [(1, -1, 2, -2)]
    assert hextant_embed([(0, 0)]) == [(0, 0, 0, 0)]
    q = hextant_embed([(3, -5)])[0]
    assert q[0] + q[1] == 0 and q[2] + q[3] == 0


def test_hextant_rect_round_trip():
    r = Rect(Fraction(-1), Fraction(2), Fraction(0), Fraction(5, 2))
    assert hextant_to_rect(rect_to_hextant(r)) == r


def test_hextant_examples():
    pts = [(0, 0), (3, 1), (-2, 7)]
    huge = Hextant(-10**9, -10**9, -10**9, -10**9)
    everything = Rect(-10**9, 10**9, -10**9, 10**9)
    assert hextant_range_check(pts, everything, huge)
    assert all(huge.contains(q) for q in hextant_embed(pts))
    single = [(1, 1)]
    away = Rect(2, 3, 2, 3)
    assert hextant_range_check(single, away, rect_to_hextant(away))
    assert not rect_to_hextant(away).contains(hextant_embed(single)[0])
    # a hextant that is not the rectangle's image disagrees somewhere
    assert not hextant_range_check([(0, 0)], Rect(-1, 1, -1, 1), Hextant(1, -1, -1, -1))


def test_hextant_random():
    rng = random.Random(5)
    for _ in range(50):
        pts = [(rng.randint(-20, 20), rng.randint(-20, 20)) for _ in range(20)]
        a, b = sorted(rng.randint(-25, 25) for _ in range(2))
        c, d = sorted(rng.randint(-25, 25) for _ in range(2))
        r = Rect(a, b, c, d)
        assert hextant_range_check(pts, r, rect_to_hextant(r))
