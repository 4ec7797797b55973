"""Exact rational kernel: the polygon D, homothets c + sD and point sets.

Everything here works on :class:`fractions.Fraction` values. Nothing is ever
rounded; the only way floats enter the system is the SVG renderer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class GeneralPositionError(ValueError):
    """Raised when an operation needs general position and does not have it."""

    def __init__(self, message: str, verdict: "GPVerdict | None" = None):
        super().__init__(message)
        self.verdict = verdict


def as_rational(value) -> Fraction:
    """Convert an int, Fraction or exact string ("3", "-1/4", "0.125")."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in rational {value!r}") from None
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


class Point2(NamedTuple):
    x: Fraction
    y: Fraction


def point(x, y) -> Point2:
    return Point2(as_rational(x), as_rational(y))


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orient(a, b, c):
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    v = cross(b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1])
    return (v > 0) - (v < 0)


def _primitive(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector by a positive factor to coprime integers."""
    den = math.lcm(*(v.denominator for v in values))
    ints = [int(v * den) for v in values]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints) if g else tuple(ints)


class ConvexPolygon:
    """A strictly convex polygon D, normalized so its vertex centroid is 0.

    ``edges[i] = (nx, ny, b)`` are coprime integers with D = {p : n_i.p < b_i};
    edge i runs from ``vertices[i]`` to ``vertices[i + 1]``.
    """

    def __init__(self, vertices: Iterable, normalize: bool = True):
        verts = [point(*v) for v in vertices]
        if len(verts) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if len(set(verts)) != len(verts):
            raise ValueError("repeated polygon vertex")
        area2 = sum(cross(a.x, a.y, b.x, b.y) for a, b in zip(verts, verts[1:] + verts[:1]))
        if area2 == 0:
            raise ValueError("degenerate polygon")
        if area2 < 0:
            verts.reverse()
        k = len(verts)
        for i in range(k):
            if orient(verts[i - 1], verts[i], verts[(i + 1) % k]) <= 0:
                raise ValueError("polygon is not strictly convex")
        if normalize:
            cx = sum(v.x for v in verts) / k
            cy = sum(v.y for v in verts) / k
            verts = [Point2(v.x - cx, v.y - cy) for v in verts]
            self.shift = Point2(cx, cy)
        else:
            self.shift = Point2(Fraction(0), Fraction(0))
        self.vertices: tuple[Point2, ...] = tuple(verts)
        edges = []
        for i in range(k):
            a, b = verts[i], verts[(i + 1) % k]
            nx, ny = b.y - a.y, a.x - b.x
            edges.append(_primitive((nx, ny, nx * a.x + ny * a.y)))
        if any(e[2] <= 0 for e in edges):
            raise ValueError("origin is not interior to the polygon; use normalize=True")
        self.edges: tuple[tuple[int, int, int], ...] = tuple(edges)

    @property
    def side_count(self) -> int:
        return len(self.vertices)

    def edge_direction(self, i: int) -> tuple[Fraction, Fraction]:
        a, b = self.vertices[i], self.vertices[(i + 1) % self.side_count]
        return b.x - a.x, b.y - a.y

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({[(str(v.x), str(v.y)) for v in self.vertices]})"


@dataclass(frozen=True)
class Homothet:
    center: Point2
    scale: Fraction

    def __post_init__(self):
        object.__setattr__(self, "center", point(*self.center))
        object.__setattr__(self, "scale", as_rational(self.scale))
        if self.scale <= 0:
            raise ValueError("homothet scale must be positive")

    def __str__(self):
        return f"homothet center ({self.center.x}, {self.center.y}) scale {self.scale}"

    def vertices(self, D: ConvexPolygon) -> list[Point2]:
        c, s = self.center, self.scale
        return [Point2(c.x + s * v.x, c.y + s * v.y) for v in D.vertices]


def edge_slacks(D: ConvexPolygon, h: Homothet, p) -> list[Fraction]:
    """n_i.(p - c) - s*b_i per edge; negative means strictly inside that side."""
    dx, dy = p[0] - h.center[0], p[1] - h.center[1]
    return [nx * dx + ny * dy - h.scale * b for nx, ny, b in D.edges]


def point_in_homothet(D: ConvexPolygon, h: Homothet, p, closed: bool = False) -> bool:
    worst = max(edge_slacks(D, h, p))
    return worst <= 0 if closed else worst < 0


def segment_meets_homothet(D: ConvexPolygon, h: Homothet, a, b) -> bool:
    """Does the closed segment ab meet the open homothet h?"""
    lo, hi = Fraction(0), Fraction(1)
    lo_open = hi_open = False
    for nx, ny, off in D.edges:
        # slack(t) = const + t * slope, need < 0
        const = nx * (a[0] - h.center[0]) + ny * (a[1] - h.center[1]) - h.scale * off
        slope = nx * (b[0] - a[0]) + ny * (b[1] - a[1])
        if slope == 0:
            if const >= 0:
                return False
            continue
        t = Fraction(-const) / slope
        if slope > 0 and (t < hi or (t == hi and not hi_open)):
            hi, hi_open = t, True
        elif slope < 0 and (t > lo or (t == lo and not lo_open)):
            lo, lo_open = t, True
    return lo < hi or (lo == hi and not lo_open and not hi_open)


def convex_distance(D: ConvexPolygon, c, p) -> Fraction:
    """Smallest s >= 0 with p in the closed homothet c + sD."""
    dx, dy = p[0] - c[0], p[1] - c[1]
    best = max(Fraction(nx * dx + ny * dy, b) for nx, ny, b in D.edges)
    return max(best, Fraction(0))


@dataclass(frozen=True)
class GPVerdict:
    ok: bool
    kind: str | None = None  # "parallel" | "boundary"
    witness: tuple[int, ...] = ()
    edge: int | None = None
    homothet: Homothet | None = None

    def describe(self) -> str:
        if self.ok:
            return "general position"
        if self.kind == "parallel":
            return f"points {self.witness} lie on a line parallel to side {self.edge}"
        return f"points {self.witness} lie on the boundary of {self.homothet}"


@dataclass(frozen=True)
class PointSet:
    points: tuple[Point2, ...]
    # tri-state: None = unchecked, otherwise the verdict and the polygon it holds for
    verdict: GPVerdict | None = field(default=None, compare=False)
    checked_for: ConvexPolygon | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        pts = tuple(point(*p) for p in self.points)
        if len(set(pts)) != len(pts):
            raise ValueError("duplicate points")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    @property
    def status(self) -> str:
        if self.verdict is None:
            return "unchecked"
        return "verified" if self.verdict.ok else "violated"

    def is_verified_for(self, D: ConvexPolygon) -> bool:
        return self.verdict is not None and self.verdict.ok and self.checked_for == D

    def subset(self, indices: Iterable[int]) -> "PointSet":
        sub = PointSet(tuple(self.points[i] for i in indices))
        if self.verdict is not None and self.verdict.ok:
            # general position is inherited by subsets
            sub = replace(sub, verdict=self.verdict, checked_for=self.checked_for)
        return sub


def general_position_check(D: ConvexPolygon, S: PointSet) -> GPVerdict:
    """Exact check that no two points span a side direction and no four points
    share a homothet boundary."""
    from .ranges import scan

    bad = scan(D, S).crowded
    if bad is not None:
        return GPVerdict(False, "boundary", bad.boundary, homothet=bad.homothet)
    pts = S.points
    for i in range(len(D.edges)):
        ex, ey = D.edge_direction(i)
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if cross(ex, ey, pts[b].x - pts[a].x, pts[b].y - pts[a].y) == 0:
                    return GPVerdict(False, "parallel", (a, b), edge=i)
    return GPVerdict(True)


def verify_general_position(D: ConvexPolygon, S: PointSet) -> PointSet:
    """Return S marked as verified for D, or raise GeneralPositionError."""
    if S.is_verified_for(D):
        return S
    verdict = general_position_check(D, S)
    if not verdict.ok:
        raise GeneralPositionError(verdict.describe(), verdict)
    return replace(S, verdict=verdict, checked_for=D)


def waive_general_position(D: ConvexPolygon, S: PointSet) -> PointSet:
    """Mark S as usable for D without checking.

    Range enumeration stays exact on degenerate input; what is lost are the
    structural guarantees (triangular faces, Delaunay properties) that the
    coloring argument builds on.
    """
    return replace(S, verdict=GPVerdict(True, "waived"), checked_for=D)


def require_general_position(D: ConvexPolygon, S: PointSet) -> None:
    if not S.is_verified_for(D):
        raise GeneralPositionError(
            f"point set is {S.status} for this polygon; call verify_general_position first"
        )


_MASK64 = (1 << 64) - 1


def splitmix64(seed: int):
    """Infinite stream of 64-bit words (SplitMix64)."""
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        yield z ^ (z >> 31)


def perturb(S: PointSet, magnitude, seed: int) -> PointSet:
    """Move every point by an offset in (-magnitude, magnitude)^2.

    Offsets are multiples of magnitude / 2^32 drawn from a SplitMix64 stream,
    so the result depends only on (S, magnitude, seed). The returned set is
    unchecked.
    """
    magnitude = as_rational(magnitude)
    if magnitude <= 0:
        raise ValueError("perturbation magnitude must be positive")
    stream = splitmix64(seed)
    out = []
    for p in S.points:
        offs = []
        for _ in range(2):
            u = next(stream) >> 32  # 32 uniform bits
            offs.append(magnitude * Fraction(2 * u + 1 - (1 << 32), 1 << 32))
        out.append(Point2(p.x + offs[0], p.y + offs[1]))
    return PointSet(tuple(out))


def extremal_points(D: ConvexPolygon, S: PointSet | Sequence) -> dict[int, int]:
    """Map each side index to the unique point of S furthest in its normal."""
    pts = S.points if isinstance(S, PointSet) else tuple(S)
    if not pts:
        raise ValueError("extremal points of an empty set")
    result = {}
    for i, (nx, ny, _) in enumerate(D.edges):
        vals = [nx * p[0] + ny * p[1] for p in pts]
        top = max(vals)
        winners = [j for j, v in enumerate(vals) if v == top]
        if len(winners) > 1:
            raise GeneralPositionError(
                f"points {tuple(winners[:2])} tie for side {i}",
                GPVerdict(False, "parallel", tuple(winners[:2]), edge=i),
            )
        result[i] = winners[0]
    return result
