import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import Delaunay

from oracles import path_forest, random_points
from polycolor.delaunay import plane_graph, walk_faces
from polycolor.pathcolor import poh_coloring, triangulate, verify_path_property

TRI = (3, [(0, 1), (1, 2), (0, 2)])
K4_POS = [(0, 0), (6, 0), (3, 6), (3, 2)]
K4_EDGES = list(itertools.combinations(range(4), 2))


def test_triangle_with_small_classes_passes():
    for col in itertools.product((1, 2, 3), repeat=3):
        small = max(col.count(c) for c in col) <= 2
        assert bool(verify_path_property(TRI, col)) == small


def test_k4_example():
    assert verify_path_property((4, K4_EDGES), (1, 1, 2, 3))
    G = plane_graph(K4_POS, K4_EDGES)
    assert verify_path_property(G, poh_coloring(G))


def test_star_in_one_color_fails():
    v = verify_path_property((4, [(0, 1), (0, 2), (0, 3)]), (1, 1, 1, 1))
    assert not v and v.kind == "degree" and v.vertices == (0, 1, 2, 3)


def test_monochromatic_triangle_is_a_cycle():
    v = verify_path_property(TRI, (2, 2, 2))
    assert not v and v.kind == "cycle" and v.color == 2


def test_proper_coloring_passes():
    # a wheel with an even rim has a proper 3-coloring
    edges = [(0, i) for i in range(1, 7)] + [(i, i % 6 + 1) for i in range(1, 7)]
    assert verify_path_property((7, edges), (3, 1, 2, 1, 2, 1, 2))


def test_alternating_pairs_on_a_path():
    edges = [(i, i + 1) for i in range(5)]
    assert verify_path_property((6, edges), (1, 1, 2, 2, 1, 1))


def test_length_mismatch_is_an_error():
    with pytest.raises(ValueError):
        verify_path_property(TRI, (1, 2))


def test_tiny_graphs():
    assert poh_coloring(plane_graph([], [])) == []
    assert poh_coloring(plane_graph([(0, 0)], [])) == [1]
    assert poh_coloring(plane_graph([(0, 0), (1, 0)], [(0, 1)])) == [1, 2]


def test_disconnected_and_edgeless():
    G = plane_graph([(0, 0), (5, 1), (2, 7), (9, 9), (12, 3)], [])
    col = poh_coloring(G)
    assert set(col) <= {1, 2, 3} and verify_path_property(G, col)
    G = plane_graph([(0, 0), (5, 1), (2, 7), (20, 20), (25, 21), (22, 27)],
                    [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert verify_path_property(G, poh_coloring(G))


def test_triangulate_completes_a_square():
    G = plane_graph([(0, 0), (2, 0), (2, 2), (0, 2)], [(0, 1), (1, 2), (2, 3), (3, 0)])
    rot = triangulate(G.rotation)
    assert sum(len(r) for r in rot) // 2 == 6
    assert all(len(f) == 3 for f in walk_faces(rot))


def _scipy_graph(rng, n, drop):
    pts = random_points(rng, n)
    tri = Delaunay(pts)
    edges = set()
    for a, b, c in tri.simplices:
        for u, v in ((a, b), (b, c), (a, c)):
            edges.add((min(u, v), max(u, v)))
    edges = sorted((int(u), int(v)) for u, v in edges)
    if drop:
        edges = [e for e in edges if rng.random() > drop]
    return pts, edges


@pytest.mark.parametrize("seed", range(10))
def test_random_delaunay_triangulations(seed):
    rng = random.Random(seed)
    pts, edges = _scipy_graph(rng, rng.randint(3, 120), 0.3 if seed % 2 else 0)
    G = plane_graph(pts, edges)
    col = poh_coloring(G)
    assert set(col) <= {1, 2, 3}
    assert verify_path_property(G, col)
    # independent union-find check
    assert path_forest(len(pts), edges, col)


def test_deterministic():
    rng = random.Random(77)
    pts, edges = _scipy_graph(rng, 80, 0)
    G = plane_graph(pts, edges)
    assert poh_coloring(G) == poh_coloring(plane_graph(pts, edges))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 40))
def test_path_property_on_generated_triangulations(seed, n):
    rng = random.Random(seed)
    pts, edges = _scipy_graph(rng, n, 0)
    G = plane_graph(pts, edges)
    assert path_forest(n, edges, poh_coloring(G))


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n),
    st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1])),
    st.lists(st.integers(1, 3), min_size=n, max_size=n))))
def test_verifier_agrees_with_union_find(case):
    n, edges, col = case
    assert bool(verify_path_property((n, sorted(edges)), col)) == path_forest(n, sorted(edges), col)
