"""JSON documents with exact rationals.

Rationals are written as "num/den" strings (plain integers as "n"). On input
strings, integers and decimal literals are all accepted; decimals are read
exactly (0.1 means 1/10), never through a float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .geometry import ConvexPolygon, Homothet, Point2, PointSet, as_rational, point

PRESETS = {
    "square": ((0, 0), (1, 0), (1, 1), (0, 1)),
    "triangle": ((-1, -1), (2, -1), (-1, 2)),
}


class DocumentError(ValueError):
    pass


def fmt(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_q(value) -> Fraction:
    try:
        return as_rational(value)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"bad rational {value!r}: {exc}") from None


def parse_pair(value) -> Point2:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise DocumentError(f"expected a coordinate pair, got {value!r}")
    return point(parse_q(value[0]), parse_q(value[1]))


def fmt_pair(p) -> list[str]:
    return [fmt(p[0]), fmt(p[1])]


def fmt_homothet(h: Homothet) -> dict:
    return {"center": fmt_pair(h.center), "scale": fmt(h.scale)}


def loads(text: str):
    try:
        # keep decimals exact: Fraction("0.1") == 1/10
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None


def _plain(obj):
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), indent=2) + "\n"


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    return loads(text)


@dataclass
class InstanceDocument:
    polygon: tuple[Point2, ...]
    points: tuple[Point2, ...]
    colors: list | None = None
    params: dict = field(default_factory=dict)  # t, c_D, seed, eps

    def D(self) -> ConvexPolygon:
        try:
            return ConvexPolygon(self.polygon)
        except ValueError as exc:
            raise DocumentError(f"bad polygon: {exc}") from None

    def S(self) -> PointSet:
        try:
            return PointSet(self.points)
        except ValueError as exc:
            raise DocumentError(f"bad point set: {exc}") from None

    def to_json(self) -> dict:
        out = {"polygon": [fmt_pair(p) for p in self.polygon],
               "points": [fmt_pair(p) for p in self.points]}
        if self.colors is not None:
            out["colors"] = list(self.colors)
        if self.params:
            out["params"] = {k: fmt(v) if isinstance(v, Fraction) else v for k, v in self.params.items()}
        return out

    @classmethod
    def from_json(cls, doc) -> "InstanceDocument":
        if not isinstance(doc, dict):
            raise DocumentError("an instance document is a JSON object")
        polygon = parse_polygon(doc.get("polygon"))
        points = parse_points(doc.get("points", []))
        colors = doc.get("colors")
        if colors is not None:
            colors = parse_colors(colors)
        params = {}
        for key, val in (doc.get("params") or {}).items():
            if key in ("t", "seed"):
                params[key] = int(val)
            elif key in ("c_D", "eps"):
                params[key] = parse_q(val)
            else:
                raise DocumentError(f"unknown parameter {key!r}")
        return cls(polygon, points, colors, params)


def parse_polygon(value) -> tuple[Point2, ...]:
    if isinstance(value, str):
        if value in PRESETS:
            return tuple(point(*v) for v in PRESETS[value])
        raise DocumentError(f"unknown polygon preset {value!r}")
    if isinstance(value, dict):
        value = value.get("polygon")
    if not isinstance(value, list):
        raise DocumentError("polygon must be a list of vertices")
    return tuple(parse_pair(v) for v in value)


def parse_points(value) -> tuple[Point2, ...]:
    if isinstance(value, dict):
        value = value.get("points")
    if not isinstance(value, list):
        raise DocumentError("points must be a list of coordinate pairs")
    return tuple(parse_pair(v) for v in value)


def parse_colors(value) -> list:
    if isinstance(value, dict):
        value = value.get("colors")
    if not isinstance(value, list):
        raise DocumentError("colors must be a list")
    return [tuple(c) if isinstance(c, list) else c for c in value]
