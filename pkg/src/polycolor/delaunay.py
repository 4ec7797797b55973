"""The generalized Delaunay graph DT_D(S) as a plane graph.

Edges come straight from the range engine (a pair is an edge iff it is a
realizable range); the embedding is the straight-line drawing at the input
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import combinations

from .geometry import ConvexPolygon, Point2, PointSet, cross, orient
from .ranges import RangeSpace, indices_of, range_space


class EmbeddingError(RuntimeError):
    """The straight-line drawing is not a plane embedding."""


def _half(dx, dy) -> int:
    return 0 if dy > 0 or (dy == 0 and dx > 0) else 1


def _angle_cmp(a, b) -> int:
    ha, hb = _half(*a), _half(*b)
    if ha != hb:
        return ha - hb
    c = cross(a[0], a[1], b[0], b[1])
    return -1 if c > 0 else (1 if c < 0 else 0)


def ccw_order(center, others) -> list[int]:
    """Indices of ``others`` sorted counterclockwise by direction from center,
    starting at the positive x axis."""
    dirs = [(p[0] - center[0], p[1] - center[1]) for p in others]
    return sorted(range(len(others)), key=cmp_to_key(lambda i, j: _angle_cmp(dirs[i], dirs[j])))


def walk_faces(rotation) -> list[tuple[int, ...]]:
    """Faces of a rotation system, each traced with the face on its left."""
    pos = [{u: i for i, u in enumerate(r)} for r in rotation]
    seen = set()
    faces = []
    for u in range(len(rotation)):
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                rb = rotation[b]
                a, b = b, rb[(pos[b][a] - 1) % len(rb)]
            faces.append(tuple(face))
    return faces


def _area2(positions, face) -> object:
    return sum(
        cross(positions[a][0], positions[a][1], positions[b][0], positions[b][1])
        for a, b in zip(face, face[1:] + face[:1])
    )


@dataclass(frozen=True)
class PlaneGraph:
    positions: tuple[Point2, ...]
    edges: tuple[tuple[int, int], ...]
    rotation: tuple[tuple[int, ...], ...]  # counterclockwise neighbor order
    faces: tuple[tuple[int, ...], ...] = field(repr=False)
    outer: int | None = None  # index into faces

    @property
    def n(self) -> int:
        return len(self.positions)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def inner_faces(self) -> list[tuple[int, ...]]:
        return [f for i, f in enumerate(self.faces) if i != self.outer]

    def adjacency_masks(self) -> list[int]:
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks


def plane_graph(positions, edges) -> PlaneGraph:
    """Assemble a straight-line plane graph (embedding is not checked here)."""
    positions = tuple(positions)
    edges = tuple(sorted({(min(u, v), max(u, v)) for u, v in edges}))
    nbrs = [[] for _ in positions]
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = []
    for v, ns in enumerate(nbrs):
        order = ccw_order(positions[v], [positions[u] for u in ns])
        rotation.append(tuple(ns[i] for i in order))
    faces = walk_faces(rotation)
    outer = None
    if faces:
        # the outer face is the one traced clockwise; with a tree every face
        # has zero area, so fall back to the first walk
        outer = min(range(len(faces)), key=lambda i: (_area2(positions, faces[i]), i))
    return PlaneGraph(positions, edges, tuple(rotation), tuple(faces), outer)


def _on_segment(a, b, p) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_conflict(a, b, c, d) -> bool:
    """Do segments ab and cd meet anywhere other than a shared endpoint?"""
    shared = {a, b} & {c, d}
    if len(shared) == 2:
        return True
    if shared:
        (s,) = shared
        x = b if a == s else a
        y = d if c == s else c
        # overlapping iff collinear and pointing the same way
        if orient(s, x, y) != 0:
            return False
        return (x[0] - s[0]) * (y[0] - s[0]) + (x[1] - s[1]) * (y[1] - s[1]) > 0
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and _on_segment(a, b, c))
        or (o2 == 0 and _on_segment(a, b, d))
        or (o3 == 0 and _on_segment(c, d, a))
        or (o4 == 0 and _on_segment(c, d, b))
    )


def crossing_pairs(G: PlaneGraph) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    P = G.positions
    return [
        (e, f)
        for e, f in combinations(G.edges, 2)
        if segments_conflict(P[e[0]], P[e[1]], P[f[0]], P[f[1]])
    ]


def build_dt(D: ConvexPolygon, S: PointSet, space: RangeSpace | None = None) -> PlaneGraph:
    """Edges are the realizable 2-point ranges."""
    if len(S) < 1:
        raise ValueError("empty point set")
    space = space or range_space(D, S)
    edges = [indices_of(m) for m in space.masks if m.bit_count() == 2]
    G = plane_graph(S.points, edges)
    bad = crossing_pairs(G)
    if bad:
        raise EmbeddingError(f"Delaunay edges cross: {bad[0]}")
    return G


def is_connected(G: PlaneGraph, mask: int | None = None, adj: list[int] | None = None) -> bool:
    """Is the subgraph induced by ``mask`` (default: all vertices) connected?"""
    if mask is None:
        mask = (1 << G.n) - 1
    if mask == 0:
        return True
    adj = adj or G.adjacency_masks()
    reach = mask & -mask
    frontier = reach
    while frontier:
        nxt = 0
        while frontier:
            low = frontier & -frontier
            nxt |= adj[low.bit_length() - 1]
            frontier ^= low
        nxt &= mask & ~reach
        reach |= nxt
        frontier = nxt
    return reach == mask


@dataclass
class DTReport:
    crossings: list = field(default_factory=list)
    connected: bool = True
    bad_faces: list = field(default_factory=list)
    edge_bound_ok: bool = True
    disconnected_ranges: list = field(default_factory=list)
    split_violations: list = field(default_factory=list)  # (range, edge)

    @property
    def ok(self) -> bool:
        return (
            not self.crossings
            and self.connected
            and not self.bad_faces
            and self.edge_bound_ok
            and not self.disconnected_ranges
            and not self.split_violations
        )

    def summary(self) -> str:
        if self.ok:
            return "all Delaunay checks pass"
        parts = []
        if self.crossings:
            parts.append(f"crossing edges {self.crossings[0]}")
        if not self.connected:
            parts.append("graph is disconnected")
        if self.bad_faces:
            parts.append(f"non-triangular inner face {self.bad_faces[0]}")
        if not self.edge_bound_ok:
            parts.append("more than 3n-6 edges")
        if self.disconnected_ranges:
            parts.append(f"range {self.disconnected_ranges[0]} induces a disconnected subgraph")
        if self.split_violations:
            rng, e = self.split_violations[0]
            parts.append(f"edge {e} splits range {rng} with points on both sides")
        return "; ".join(parts)


def check_dt_properties(G: PlaneGraph, D: ConvexPolygon, S: PointSet,
                        space: RangeSpace | None = None) -> DTReport:
    space = space or range_space(D, S)
    rep = DTReport()
    rep.crossings = crossing_pairs(G)
    rep.connected = is_connected(G)
    rep.bad_faces = [f for f in G.inner_faces() if len(f) != 3]
    if G.n >= 3:
        rep.edge_bound_ok = len(G.edges) <= 3 * G.n - 6

    pts = S.points
    adj = G.adjacency_masks()
    sides = []
    for u, v in G.edges:
        left = right = 0
        for w, p in enumerate(pts):
            o = orient(pts[u], pts[v], p)
            if o > 0:
                left |= 1 << w
            elif o < 0:
                right |= 1 << w
        sides.append((u, v, left, right))

    H = space.scan.model.H.tolist()
    E = D.edges
    for mask in space.masks:
        if mask.bit_count() < 2:
            continue
        if not is_connected(G, mask, adj):
            rep.disconnected_ranges.append(indices_of(mask))
        K = q = None
        for u, v, left, right in sides:
            if (mask >> u) & 1 or (mask >> v) & 1:
                continue
            if not (mask & left and mask & right):
                continue
            if K is None:
                cx, cy, cs, q = space.witness_scaled(mask)
                K = [nx * cx + ny * cy + b * cs for nx, ny, b in E]
            a = [H[u][e] * q - K[e] for e in range(len(E))]
            z = [H[v][e] * q - K[e] for e in range(len(E))]
            if _segment_enters(a, z):
                rep.split_violations.append((indices_of(mask), (u, v)))
    return rep


def _segment_enters(start, end) -> bool:
    """Is there t in [0, 1] with start[e] + t (end[e] - start[e]) < 0 for all e?

    Integer version of the open-body segment test; bounds on t are kept as
    fractions num/den with den > 0.
    """
    lo, hi = (0, 1), (1, 1)
    lo_open = hi_open = False
    for a, z in zip(start, end):
        m = z - a
        if m == 0:
            if a >= 0:
                return False
            continue
        t = (-a, m) if m > 0 else (a, -m)
        if m > 0:
            c = t[0] * hi[1] - hi[0] * t[1]
            if c < 0 or (c == 0 and not hi_open):
                hi, hi_open = t, True
        else:
            c = t[0] * lo[1] - lo[0] * t[1]
            if c > 0 or (c == 0 and not lo_open):
                lo, lo_open = t, True
    c = lo[0] * hi[1] - hi[0] * lo[1]
    return c < 0 or (c == 0 and not lo_open and not hi_open)
