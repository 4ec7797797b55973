"""3-coloring a plane graph so that every monochromatic component is a path.

Poh's two-path scheme on a triangulation: the boundary cycle of the current
region is split into two paths P and Q, precolored with two distinct colors,
and every interior vertex adjacent to P (Q) avoids P's (Q's) color. Either a
chord splits the region in two, or a shortest interior path joining the far
ends of P and Q is colored with the third color and the region is split
along it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.planar_drawing import triangulate_embedding

from .delaunay import PlaneGraph, walk_faces


@dataclass(frozen=True)
class PathPropertyVerdict:
    ok: bool
    color: int | None = None
    kind: str | None = None  # "degree" | "cycle"
    vertices: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok


def _edge_list(G) -> tuple[int, list]:
    if isinstance(G, PlaneGraph):
        return G.n, list(G.edges)
    n, edges = G
    return n, list(edges)


def verify_path_property(G, col) -> PathPropertyVerdict:
    """Check that each color class induces a disjoint union of simple paths.

    ``G`` is a PlaneGraph or a pair ``(vertex_count, edges)``.
    """
    n, edges = _edge_list(G)
    if len(col) != n:
        raise ValueError(f"coloring has {len(col)} entries for {n} vertices")
    mono = [[] for _ in range(n)]
    for u, v in edges:
        if col[u] == col[v]:
            mono[u].append(v)
            mono[v].append(u)
    for v in range(n):
        if len(mono[v]) > 2:
            return PathPropertyVerdict(False, col[v], "degree", (v, *sorted(mono[v])))
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        comp, stack, seen[s] = [], [s], True
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in mono[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        deg = sum(len(mono[v]) for v in comp) // 2
        if deg != len(comp) - 1:
            return PathPropertyVerdict(False, col[s], "cycle", tuple(sorted(comp)))
    return PathPropertyVerdict(True)


def triangulate(rotation) -> list[tuple[int, ...]]:
    """Extend a plane rotation system (ccw neighbor lists) to a triangulation.

    Returns the ccw rotation of the triangulated graph; needs >= 3 vertices.
    """
    n = len(rotation)
    emb = nx.PlanarEmbedding()
    emb.add_nodes_from(range(n))
    # networkx stores clockwise order
    emb.set_data({v: list(reversed(r)) for v, r in enumerate(rotation) if r})
    emb.check_structure()
    tri, _ = triangulate_embedding(emb, fully_triangulate=True)
    tri.check_structure()
    rot = [tuple(reversed(list(tri.neighbors_cw_order(v)))) for v in range(n)]
    m = sum(len(r) for r in rot) // 2
    if m != 3 * n - 6 or any(len(f) != 3 for f in walk_faces(rot)):
        raise RuntimeError("triangulation augmentation did not produce a triangulation")
    return rot


def _poh_triangulation(rot) -> list[int]:
    n = len(rot)
    pos = [{u: i for i, u in enumerate(r)} for r in rot]
    col = [0] * n

    def left_neighbors(v, nxt, prv):
        """Neighbors of cycle vertex v strictly inside the region, in ccw order."""
        r = rot[v]
        i = (pos[v][nxt] + 1) % len(r)
        out = []
        while r[i] != prv:
            out.append(r[i])
            i = (i + 1) % len(r)
        return out

    # trace one face so that the rest of the graph lies on the left of the cycle
    a = 0
    b = rot[a][0]
    c = rot[b][(pos[b][a] - 1) % len(rot[b])]
    outer = [a, c, b]
    col[a], col[c], col[b] = 1, 2, 2
    stack = [(outer, 1)]
    while stack:
        cycle, split = stack.pop()
        k = len(cycle)
        if k < 3:
            continue
        on_cycle = {v: i for i, v in enumerate(cycle)}
        lefts = [left_neighbors(cycle[i], cycle[(i + 1) % k], cycle[i - 1]) for i in range(k)]
        chord = None
        for i in range(k):
            for u in lefts[i]:
                if u in on_cycle:
                    chord = (i, on_cycle[u])
                    break
            if chord:
                break
        if chord:
            i, j = chord
            if i < j:
                first = cycle[i : j + 1]
                second = cycle[j:] + cycle[: i + 1]
            else:
                first = cycle[i:] + cycle[: j + 1]
                second = cycle[j : i + 1]
            stack.append(_rebase(second, col))
            stack.append(_rebase(first, col))
            continue
        if not any(lefts):
            if k != 3:
                raise RuntimeError(f"empty region bounded by a {k}-cycle")
            continue
        cp, cq = col[cycle[0]], col[cycle[split]]
        free = 6 - cp - cq
        # w: first interior neighbor of P's last vertex after Q's first vertex;
        # w2: first interior neighbor of Q's last vertex after P's first vertex
        w = lefts[split - 1][0]
        w2 = lefts[k - 1][0]
        path = _shortest_path(rot, w, w2, on_cycle)
        for v in path:
            col[v] = free
        stack.append((cycle[split:] + path[::-1], k - split))
        stack.append((cycle[:split] + path, split))
    return col


def _rebase(cycle, col):
    """Rotate a two-colored cycle so it starts with the first vertex of a color run."""
    k = len(cycle)
    start = next(i for i in range(k) if col[cycle[i]] != col[cycle[i - 1]])
    cyc = cycle[start:] + cycle[:start]
    split = next(i for i in range(k) if col[cyc[i]] != col[cyc[0]])
    return cyc, split


def _shortest_path(rot, src, dst, blocked) -> list[int]:
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for u in sorted(rot[v]):
            if u not in prev and u not in blocked:
                prev[u] = v
                queue.append(u)
    if dst not in prev:
        raise RuntimeError("interior path not found")
    path = [dst]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def poh_coloring(G: PlaneGraph) -> list[int]:
    """Colors in {1, 2, 3}; every monochromatic component is an induced path."""
    n = G.n
    if n <= 2:
        return [1, 2][:n]
    col = _poh_triangulation(triangulate(G.rotation))
    verdict = verify_path_property(G, col)
    if not verdict:
        raise RuntimeError(f"path property failed: {verdict}")
    return col
