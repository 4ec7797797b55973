"""The hypergraphs H(k, l, m) that no 3-coloring can avoid, their
realization by unit balls in R^3, and the plane-to-hextant embedding.

H(k, l, m) is built from H(k-1, l, m), H(k, l-1, m), H(k, l, m-1) and a new
vertex p. The first child's E1 edges grow by p, its other families are
copied; symmetrically for the second (E2) and third (E3) child. When a
parameter is 1 the matching family is all singletons instead. Any
parameter 0 gives the empty hypergraph.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .geometry import as_rational


@dataclass(frozen=True)
class RecursiveHypergraph:
    k: int
    l: int
    m: int
    n_vertices: int
    families: tuple[tuple[frozenset, ...], tuple[frozenset, ...], tuple[frozenset, ...]]
    removed: tuple = field(default=(), compare=False)

    @property
    def E1(self):
        return self.families[0]

    @property
    def E2(self):
        return self.families[1]

    @property
    def E3(self):
        return self.families[2]

    def edges(self):
        """(family index, edge) over E1, E2, E3 in order."""
        for i, fam in enumerate(self.families):
            for e in fam:
                yield i, e

    def without_edge(self, family: int, index: int) -> "RecursiveHypergraph":
        fams = list(self.families)
        fam = list(fams[family])
        del fam[index]
        fams[family] = tuple(fam)
        return RecursiveHypergraph(self.k, self.l, self.m, self.n_vertices, tuple(fams),
                                   self.removed + ((family, index),))


_EMPTY = ((), (), ())


@functools.lru_cache(maxsize=None)
def _build(k: int, l: int, m: int):
    if min(k, l, m) == 0:
        return 0, _EMPTY
    kids = [_build(k - 1, l, m), _build(k, l - 1, m), _build(k, l, m - 1)]
    offsets, total = [], 0
    for n, _ in kids:
        offsets.append(total)
        total += n
    p = total
    n = total + 1
    params = (k, l, m)
    fams = []
    for i in range(3):
        if params[i] == 1:
            fams.append(tuple(frozenset([v]) for v in range(n)))
            continue
        fam = []
        for j, ((_, kfams), off) in enumerate(zip(kids, offsets)):
            for e in kfams[i]:
                shifted = frozenset(v + off for v in e)
                fam.append(shifted | {p} if j == i else shifted)
        fams.append(tuple(fam))
    return n, tuple(fams)


def build_H(k: int, l: int, m: int) -> RecursiveHypergraph:
    for name, v in (("k", k), ("l", l), ("m", m)):
        if not isinstance(v, int) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")
    n, fams = _build(k, l, m)
    return RecursiveHypergraph(k, l, m, n, fams)


def vertex_count(k: int, l: int, m: int) -> int:
    return _build(k, l, m)[0]


@dataclass(frozen=True)
class UnavoidabilityVerdict:
    unavoidable: bool
    coloring: tuple[int, ...] | None = None  # an avoiding coloring, colors 0, 1, 2

    def describe(self) -> str:
        if self.unavoidable:
            return "unavoidable: every 3-coloring fills some E_i edge with color i"
        return f"avoidable, e.g. by coloring {self.coloring}"


class SearchTooLarge(ValueError):
    pass


def check_unavoidable(H: RecursiveHypergraph, guard: int = 24) -> UnavoidabilityVerdict:
    """Exhaustive search for a coloring in which no E_i edge is entirely color i.

    Vertices are colored in index order; an edge is tested once its largest
    vertex has a color.
    """
    N = H.n_vertices
    if N > guard:
        raise SearchTooLarge(f"H({H.k},{H.l},{H.m}) has {N} vertices, above the search guard {guard}")
    closing = [[] for _ in range(N)]
    for i, e in H.edges():
        if not e:
            # an empty edge is vacuously monochromatic in every color
            return UnavoidabilityVerdict(True)
        closing[max(e)].append((i, sum(1 << v for v in e)))
    classes = [0, 0, 0]
    col = [0] * N

    def extend(v):
        if v == N:
            return True
        for c in range(3):
            classes[c] |= 1 << v
            col[v] = c
            bad = any(i == c and mask & ~classes[c] == 0 for i, mask in closing[v])
            if not bad and extend(v + 1):
                return True
            classes[c] &= ~(1 << v)
        return False

    if extend(0):
        return UnavoidabilityVerdict(False, tuple(col))
    return UnavoidabilityVerdict(True)


class Point3(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction


def _add(a, b) -> Point3:
    return Point3(a[0] + b[0], a[1] + b[1], a[2] + b[2])


@dataclass(frozen=True)
class Ball3:
    center: Point3
    radius: int = 1


def child_eps(eps: Fraction) -> Fraction:
    return eps ** 5


@dataclass
class Realization:
    k: int
    l: int
    m: int
    eps: Fraction
    points: list[Point3]
    balls: list[Ball3]  # aligned with H.edges(): E1, then E2, then E3


def _realize(k, l, m, eps):
    """(points, [E1 centers, E2 centers, E3 centers]) for H(k, l, m)."""
    if min(k, l, m) == 0:
        return [], [[], [], []]
    e2, e3, e4 = eps ** 2, eps ** 3, eps ** 4
    shifts = [
        Point3(2 * eps - Fraction(3, 2) * e3, 2 * e2, Fraction(0)),
        Point3(-2 * eps + Fraction(3, 2) * e3, -2 * e2, Fraction(0)),
        Point3(Fraction(0), Fraction(0), 2 * e2),
    ]
    sub_eps = child_eps(eps)
    kids = [_realize(k - 1, l, m, sub_eps), _realize(k, l - 1, m, sub_eps), _realize(k, l, m - 1, sub_eps)]
    points = []
    for (pts, _), sh in zip(kids, shifts):
        points += [_add(p, sh) for p in pts]
    origin = Point3(Fraction(0), Fraction(0), Fraction(0))
    points.append(origin)
    # balls holding only p among the new points sit just inside the unit
    # sphere through p; the E1/E2 ones lean away from the sibling copy placed
    # on the opposite side
    singles = [
        Point3(e2 if l > 1 else Fraction(0), -1 + e4, Fraction(0)),
        Point3(-e2 if k > 1 else Fraction(0), 1 - e4, Fraction(0)),
        Point3(Fraction(0), Fraction(0), -1 + e4),
    ]
    params = (k, l, m)
    centers = [[], [], []]
    for i in range(3):
        for (_, kc), sh in zip(kids, shifts):
            centers[i] += [_add(c, sh) for c in kc[i]]
        if params[i] == 1:
            centers[i].append(singles[i])
    return points, centers


def realize_unit_balls(k: int, l: int, m: int, eps=Fraction(1, 8)) -> Realization:
    eps = as_rational(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie strictly between 0 and 1")
    if min(k, l, m) < 1:
        raise ValueError("parameters must be positive")
    points, centers = _realize(k, l, m, eps)
    balls = [Ball3(c) for fam in centers for c in fam]
    return Realization(k, l, m, eps, points, balls)


def dist2(a, b) -> Fraction:
    return sum((x - y) ** 2 for x, y in zip(a, b))


@dataclass
class RealizationVerdict:
    ok: bool
    min_margin: Fraction | None
    violations: list[tuple[int, int, int, Fraction]]  # (vertex, family, edge index, dist^2)

    def describe(self) -> str:
        if self.ok:
            return f"realization exact; smallest |dist^2 - 1| = {self.min_margin}"
        v, fam, e, d = self.violations[0]
        return f"{len(self.violations)} wrong incidences, e.g. vertex {v} vs E{fam + 1}[{e}] at dist^2 {d}"


def verify_realization(points, balls, H: RecursiveHypergraph) -> RealizationVerdict:
    edges = list(H.edges())
    if len(points) != H.n_vertices or len(balls) != len(edges):
        raise ValueError("realization does not match the hypergraph's sizes")
    viol = []
    margin = None
    counters = [0, 0, 0]
    for ball, (fam, e) in zip(balls, edges):
        idx = counters[fam]
        counters[fam] += 1
        r2 = ball.radius ** 2
        for v, p in enumerate(points):
            d = dist2(p, ball.center)
            gap = abs(d - r2)
            margin = gap if margin is None else min(margin, gap)
            inside = d < r2
            if d == r2 or inside != (v in e):
                viol.append((v, fam, idx, d))
    return RealizationVerdict(not viol, margin, viol)


def realize_verified(k: int, l: int, m: int, eps=Fraction(1, 8), max_halvings: int = 12):
    """Shrink eps by halves until the realization checks out exactly.

    Returns (realization, verdict, halvings used).
    """
    H = build_H(k, l, m)
    eps = as_rational(eps)
    for h in range(max_halvings + 1):
        real = realize_unit_balls(k, l, m, eps)
        verdict = verify_realization(real.points, real.balls, H)
        if verdict.ok:
            return real, verdict, h
        eps /= 2
    return real, verdict, max_halvings


class Point4(NamedTuple):
    x: Fraction
    y: Fraction
    z: Fraction
    w: Fraction


@dataclass(frozen=True)
class Hextant:
    """{(x, y, z, w) : x >= x0, y >= y0, z >= z0, w >= w0}."""

    x0: Fraction
    y0: Fraction
    z0: Fraction
    w0: Fraction

    def contains(self, q) -> bool:
        return q[0] >= self.x0 and q[1] >= self.y0 and q[2] >= self.z0 and q[3] >= self.w0


@dataclass(frozen=True)
class Rect:
    """Closed axis-parallel rectangle [u_lo, u_hi] x [v_lo, v_hi]."""

    u_lo: Fraction
    u_hi: Fraction
    v_lo: Fraction
    v_hi: Fraction

    def contains(self, p) -> bool:
        return self.u_lo <= p[0] <= self.u_hi and self.v_lo <= p[1] <= self.v_hi


def hextant_embed(S2) -> list[Point4]:
    """(u, v) -> (u, -u, v, -v), onto the plane x + y = 0, z + w = 0."""
    out = []
    for p in S2:
        u, v = as_rational(p[0]), as_rational(p[1])
        out.append(Point4(u, -u, v, -v))
    return out


def rect_to_hextant(r: Rect) -> Hextant:
    return Hextant(r.u_lo, -r.u_hi, r.v_lo, -r.v_hi)


def hextant_to_rect(h: Hextant) -> Rect:
    return Rect(h.x0, -h.y0, h.z0, -h.w0)


def hextant_range_check(S2, rect: Rect, hx: Hextant) -> bool:
    """Do the rectangle (in the plane) and the hextant (in R^4) pick out the
    same points?"""
    planar = {i for i, p in enumerate(S2) if rect.contains(p)}
    lifted = {i for i, q in enumerate(hextant_embed(S2)) if hx.contains(q)}
    return planar == lifted
