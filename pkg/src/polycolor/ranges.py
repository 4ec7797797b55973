"""Enumeration of the range space {S ∩ D' : D' a homothet of D}.

A homothet c + sD is a point (c_x, c_y, s) of parameter space, and a point p
sits on side i of it exactly on the plane n_i.(p - c) = s*b_i. Every range of
two or more points is realized arbitrarily close to a vertex of this plane
arrangement at which three independent tangencies hold with each tangent
point on the closed homothet (take the lexicographic minimum of (s, c_x, c_y)
over the closure of the range's parameter region). So the engine

* solves every 3-tangency system (three distinct sides, one point each; a
  point may take two adjacent sides, i.e. sit in a corner),
* keeps solutions with s > 0 whose tangent points really are on the boundary,
* reads off which subsets of the boundary points can be added to the interior
  by an arbitrarily small move of (c, s).

All arithmetic is on integers obtained by clearing denominators; numpy is
used with int64 when a bound on every intermediate fits, otherwise with
Python integers (dtype=object).
"""

from __future__ import annotations

import functools
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import (
    ConvexPolygon,
    Homothet,
    Point2,
    PointSet,
    edge_slacks,
    require_general_position,
)

_CHUNK_CELLS = 1 << 21


@dataclass(frozen=True)
class TangencyConstraint:
    point_index: int
    edge_index: int


@dataclass(frozen=True)
class PinnedCandidate:
    constraints: tuple[TangencyConstraint, TangencyConstraint, TangencyConstraint]
    homothet: Homothet
    interior: tuple[int, ...]
    boundary: tuple[int, ...]


@dataclass(frozen=True)
class RangeReport:
    interior: tuple[int, ...]
    boundary: tuple[int, ...]
    witness: Homothet
    realizable_ranges: tuple[tuple[int, ...], ...]

    @property
    def points(self) -> tuple[int, ...]:
        return self.interior


def mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


# ---------------------------------------------------------------------------
# strict homogeneous systems


def strict_direction(rows):
    """Return d with w.d > 0 for every row w, or None if there is none.

    Exact Fourier-Motzkin elimination; meant for the handful of tight
    constraints at one arrangement vertex.
    """
    rows = [tuple(Fraction(x) for x in w) for w in rows]
    if not rows:
        return ()
    return _fm(rows, len(rows[0]))


def _fm(rows, m):
    if m == 0:
        return None if rows else ()
    pos, neg, reduced = [], [], []
    for w in rows:
        lead = w[m - 1]
        if lead > 0:
            pos.append(w)
        elif lead < 0:
            neg.append(w)
        else:
            reduced.append(w[: m - 1])
    for p in pos:
        for q in neg:
            reduced.append(tuple(a / p[m - 1] - b / q[m - 1] for a, b in zip(p[: m - 1], q[: m - 1])))
    sub = _fm(reduced, m - 1)
    if sub is None:
        return None
    lows = [-sum(a * x for a, x in zip(p, sub)) / p[m - 1] for p in pos]
    highs = [sum(a * x for a, x in zip(q, sub)) / -q[m - 1] for q in neg]
    if lows and highs:
        x = (max(lows) + min(highs)) / 2
    elif lows:
        x = max(lows) + 1
    elif highs:
        x = min(highs) - 1
    else:
        x = Fraction(0)
    return sub + (x,)


def _det3(r0, r1, r2):
    return (
        r0[0] * (r1[1] * r2[2] - r1[2] * r2[1])
        - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
    )


def _adjugate(r0, r1, r2):
    m = (r0, r1, r2)

    def cof(i, j):
        rows = [m[k] for k in range(3) if k != i]
        cols = [c for c in range(3) if c != j]
        v = rows[0][cols[0]] * rows[1][cols[1]] - rows[0][cols[1]] * rows[1][cols[0]]
        return v if (i + j) % 2 == 0 else -v

    return [[cof(j, i) for j in range(3)] for i in range(3)]


def local_subsets(edges, boundary, tight):
    """Subsets B of the boundary points such that interior ∪ B is realized by a
    homothet arbitrarily close to the current one.

    Returns a list of (bmask, direction or None). ``direction`` is None when
    the subset was accepted by the independence shortcut and not solved for.
    """
    rows_all = [edges[e] for u in boundary for e in tight[u]]
    if len(rows_all) == 3 and _det3(*rows_all) != 0:
        # three independent tangencies: every sign pattern occurs nearby
        return [(mask_of(c), None) for r in range(len(boundary) + 1)
                for c in itertools.combinations(boundary, r)]
    out = []
    for r in range(len(boundary) + 1):
        for inside in itertools.combinations(boundary, r):
            d = subset_direction(edges, boundary, tight, set(inside))
            if d is not None:
                out.append((mask_of(inside), d))
    return out


def subset_direction(edges, boundary, tight, inside):
    """Direction (dc_x, dc_y, ds) moving exactly ``inside`` into the open body."""
    fixed = []
    choices = []
    for u in boundary:
        if u in inside:
            fixed.extend(edges[e] for e in tight[u])
        else:
            choices.append([tuple(-x for x in edges[e]) for e in tight[u]])
    for pick in itertools.product(*choices):
        d = strict_direction(fixed + list(pick))
        if d is not None:
            return d
    return None


# ---------------------------------------------------------------------------
# integer model and candidate scan


@dataclass
class _Candidate:
    constraints: tuple[tuple[int, int], ...]
    X: tuple[int, int, int]  # (c_x, c_y, s) * det in scaled coordinates
    det: int
    interior: int
    boundary: tuple[int, ...]
    tight: dict


class _Model:
    """D and S with denominators cleared: points scaled by L to integers."""

    def __init__(self, D: ConvexPolygon, S: PointSet):
        self.D = D
        self.edges = D.edges
        pts = S.points
        self.L = math.lcm(*(v.denominator for p in pts for v in p)) if pts else 1
        self.P = [(int(p.x * self.L), int(p.y * self.L)) for p in pts]
        rows = [[nx * X + ny * Y for nx, ny, _ in self.edges] for X, Y in self.P]
        max_h = max((abs(v) for r in rows for v in r), default=0)
        max_n = max(abs(v) for e in self.edges for v in e)
        # |value| bound for H*det - n.X - b*Xs
        bound = 24 * max_n ** 3 * max(max_h, 1)
        self.dtype = np.int64 if bound < (1 << 62) else object
        self.H = np.array(rows, dtype=self.dtype).reshape(len(pts), len(self.edges))

    def to_homothet(self, cx, cy, s) -> Homothet:
        return Homothet(Point2(Fraction(cx) / self.L, Fraction(cy) / self.L), Fraction(s) / self.L)


def _scan_triple(model: _Model, tri):
    i, j, k = tri
    E = model.edges
    rows = (E[i], E[j], E[k])
    det = _det3(*rows)
    if det == 0:
        return []
    adj = _adjugate(*rows)
    if det < 0:
        det = -det
        adj = [[-v for v in r] for r in adj]
    H = model.H
    N = H.shape[0]
    hi, hj, hk = H[:, i], H[:, j], H[:, k]
    # each tangent point must be extreme among the three in its own normal
    Ii = hi[:, None] >= hi[None, :]
    Ij = hj[:, None] >= hj[None, :]
    Ik = hk[:, None] >= hk[None, :]
    ok = (Ii[:, :, None] & Ii[:, None, :]
          & Ij.T[:, :, None] & Ij[None, :, :]
          & Ik.T[:, None, :] & Ik.T[None, :, :])
    ps, qs, rs = np.nonzero(ok)
    if len(ps) == 0:
        return []
    rhs = (hi[ps], hj[qs], hk[rs])
    X = [adj[a][0] * rhs[0] + adj[a][1] * rhs[1] + adj[a][2] * rhs[2] for a in range(3)]
    keep = X[2] > 0
    ps, qs, rs = ps[keep], qs[keep], rs[keep]
    X = [x[keep] for x in X]
    n_edges = len(E)
    En = np.array(E, dtype=model.dtype)
    Hd = H * det
    out = []
    step = max(1, _CHUNK_CELLS // max(1, N * n_edges))
    for lo in range(0, len(ps), step):
        sl = slice(lo, lo + step)
        cx, cy, cs = X[0][sl], X[1][sl], X[2][sl]
        K = cx[:, None] * En[None, :, 0] + cy[:, None] * En[None, :, 1] + cs[:, None] * En[None, :, 2]
        val = Hd[None, :, :] - K[:, None, :]
        worst = val.max(axis=2)
        idx = np.arange(len(cx))
        good = (worst[idx, ps[sl]] == 0) & (worst[idx, qs[sl]] == 0) & (worst[idx, rs[sl]] == 0)
        for c in np.nonzero(good)[0]:
            w = worst[c]
            bnd = tuple(int(u) for u in np.nonzero(w == 0)[0])
            tight = {u: tuple(int(e) for e in np.nonzero(val[c, u] == 0)[0]) for u in bnd}
            interior = mask_of(int(u) for u in np.nonzero(w < 0)[0])
            p, q, r = int(ps[lo + c]), int(qs[lo + c]), int(rs[lo + c])
            out.append(_Candidate(((p, i), (q, j), (r, k)),
                                  (int(cx[c]), int(cy[c]), int(cs[c])), det,
                                  interior, bnd, tight))
    return out


class Scan:
    """Every pinned candidate of (D, S), computed without assuming general position."""

    def __init__(self, D: ConvexPolygon, S: PointSet, threads: int = 1):
        self.model = _Model(D, S)
        self.n_points = len(S)
        triples = list(itertools.combinations(range(D.side_count), 3))
        if self.n_points == 0:
            batches = []
        elif threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                batches = list(pool.map(functools.partial(_scan_triple, self.model), triples))
        else:
            batches = [_scan_triple(self.model, t) for t in triples]
        seen = set()
        self.candidates: list[_Candidate] = []
        for batch in batches:
            for cand in batch:
                g = math.gcd(*cand.X, cand.det)
                key = tuple(v // g for v in cand.X) + (cand.det // g,)
                if key not in seen:
                    seen.add(key)
                    self.candidates.append(cand)
        self.crowded = None
        for cand in self.candidates:
            if len(cand.boundary) >= 4:
                self.crowded = PinnedCandidate(self.constraints_of(cand),
                                               self.homothet_of(cand), (), cand.boundary)
                break

    def homothet_of(self, cand: _Candidate) -> Homothet:
        return self.model.to_homothet(*(Fraction(x, cand.det) for x in cand.X))

    @staticmethod
    def constraints_of(cand: _Candidate):
        return tuple(TangencyConstraint(p, e) for p, e in cand.constraints)


@functools.lru_cache(maxsize=16)
def _cached_scan(D: ConvexPolygon, S: PointSet, threads: int) -> Scan:
    return Scan(D, S, threads)


def scan(D: ConvexPolygon, S: PointSet, threads: int = 1) -> Scan:
    return _cached_scan(D, S, threads)


# ---------------------------------------------------------------------------
# the range space


def _lp_minimal_homothets(model: _Model):
    """Scale-minimal homothets on each line where two tangencies hold.

    The lowest feasible point of such a line always picks up a third
    tangency, so these are expected to add nothing; they are kept as a cross
    check.
    """
    E = model.edges
    cons = [(p, e) for p in range(len(model.P)) for e in range(len(E))]
    found = []
    for (p, i), (q, j) in itertools.combinations(cons, 2):
        if i == j:
            continue
        if p == q and (i - j) % len(E) not in (1, len(E) - 1):
            continue
        (n1x, n1y, b1), (n2x, n2y, b2) = E[i], E[j]
        h1 = n1x * model.P[p][0] + n1y * model.P[p][1]
        h2 = n2x * model.P[q][0] + n2y * model.P[q][1]
        det = n1x * n2y - n1y * n2x
        if det != 0:
            # c(s) = c0 + s * c1
            c0 = (Fraction(h1 * n2y - n1y * h2, det), Fraction(n1x * h2 - h1 * n2x, det))
            c1 = (Fraction(-b1 * n2y + n1y * b2, det), Fraction(-n1x * b2 + b1 * n2x, det))
            base, step = (c0[0], c0[1], Fraction(0)), (c1[0], c1[1], Fraction(1))
        else:
            # parallel sides: s is fixed, c slides along the side direction
            # n2 = lam * n1 with lam < 0
            lam = Fraction(n2x, n1x) if n1x else Fraction(n2y, n1y)
            denom = b2 - lam * b1
            if denom == 0:
                continue
            s0 = (h2 - lam * h1) / denom
            t = Fraction(h1) - s0 * b1  # n1 . c
            nn = n1x * n1x + n1y * n1y
            base = (t * n1x / nn, t * n1y / nn, s0)
            step = (Fraction(-n1y), Fraction(n1x), Fraction(0))
        lo, hi = None, None
        feasible = True
        for u in {p, q}:
            X, Y = model.P[u]
            for nx, ny, b in E:
                # slack(t) = a + t*m <= 0
                a = nx * (X - base[0]) + ny * (Y - base[1]) - b * base[2]
                m = -(nx * step[0] + ny * step[1] + b * step[2])
                if m == 0:
                    if a > 0:
                        feasible = False
                elif m > 0:
                    hi = -a / m if hi is None else min(hi, -a / m)
                else:
                    lo = -a / m if lo is None else max(lo, -a / m)
        if not feasible or (lo is not None and hi is not None and lo > hi):
            continue
        if step[2] > 0:
            if lo is None or lo <= 0:
                continue
            t = lo
        else:
            if base[2] <= 0:
                continue
            t = lo if lo is not None else hi
            if t is None:
                continue
        found.append(tuple(base[a] + t * step[a] for a in range(3)))
    return found


class RangeSpace:
    """The set of realizable ranges of S, as bitmasks, with lazily built witnesses."""

    def __init__(self, D: ConvexPolygon, S: PointSet, degenerate: bool = False, threads: int = 1):
        require_general_position(D, S)
        self.D, self.S = D, S
        self.scan = scan(D, S, threads)
        model = self.scan.model
        n = len(S)
        # mask -> ("point", p) | ("cand", index, bmask) | ("free", (cx, cy, s), bmask)
        self._origin: dict[int, tuple] = {}
        for p in range(n):
            self._origin[1 << p] = ("point", p)
        for ci, cand in enumerate(self.scan.candidates):
            for bmask, _ in local_subsets(model.edges, cand.boundary, cand.tight):
                m = cand.interior | bmask
                if m and m not in self._origin:
                    self._origin[m] = ("cand", ci, bmask)
        self.degenerate_extra: list[int] = []
        if degenerate:
            for base in _lp_minimal_homothets(model):
                interior, boundary, tight = _classify_scaled(model, base)
                for bmask, _ in local_subsets(model.edges, boundary, tight):
                    m = interior | bmask
                    if m and m not in self._origin:
                        self._origin[m] = ("free", base, bmask)
                        self.degenerate_extra.append(m)
        self._masks = sorted(self._origin, key=lambda m: (bin(m).count("1"), indices_of(m)))

    def __len__(self):
        return len(self._masks)

    def __contains__(self, mask: int):
        return mask in self._origin

    @property
    def masks(self) -> list[int]:
        return self._masks

    def ranges(self) -> list[tuple[int, ...]]:
        return [indices_of(m) for m in self._masks]

    def is_edge(self, u: int, v: int) -> bool:
        return ((1 << u) | (1 << v)) in self._origin

    def witness(self, mask: int) -> Homothet:
        """An open homothet whose intersection with S is exactly ``mask`` and
        whose boundary avoids S."""
        cx, cy, cs, q = self.witness_scaled(mask)
        return self.scan.model.to_homothet(Fraction(cx, q), Fraction(cy, q), Fraction(cs, q))

    def witness_scaled(self, mask: int) -> tuple[int, int, int, int]:
        """The witness as integers (cx, cy, s, q) in the scaled frame: the
        homothet is (cx/q, cy/q) + (s/q) D there."""
        origin = self._origin[mask]
        model = self.scan.model
        if origin[0] == "point":
            X, Y = model.P[origin[1]]
            others = [max(Fraction(nx * (U - X) + ny * (V - Y), b) for nx, ny, b in model.edges)
                      for u, (U, V) in enumerate(model.P) if u != origin[1]]
            s = min(others) / 2 if others else Fraction(1)
            return X * s.denominator, Y * s.denominator, s.numerator, s.denominator
        if origin[0] == "cand":
            cand = self.scan.candidates[origin[1]]
            base, q0 = cand.X, cand.det
            boundary, tight = cand.boundary, cand.tight
        else:
            q0 = math.lcm(*(v.denominator for v in origin[1]))
            base = tuple(int(v * q0) for v in origin[1])
            _, boundary, tight = _classify_scaled(model, origin[1])
        inside = set(indices_of(origin[-1]))
        d = subset_direction(model.edges, boundary, tight, inside)
        return _step_off(model, base, q0, d)

    def report(self, mask: int) -> RangeReport:
        w = self.witness(mask)
        return realized_range(self.D, self.S, w)

    def candidate_reports(self) -> list[RangeReport]:
        model = self.scan.model
        out = []
        for cand in self.scan.candidates:
            fam = tuple(indices_of(cand.interior | b)
                        for b, _ in local_subsets(model.edges, cand.boundary, cand.tight))
            out.append(RangeReport(indices_of(cand.interior), cand.boundary,
                                   self.scan.homothet_of(cand), tuple(f for f in fam if f)))
        return out


def _classify_scaled(model: _Model, base):
    cx, cy, s = base
    interior, boundary, tight = 0, [], {}
    for u, (X, Y) in enumerate(model.P):
        vals = [nx * (X - cx) + ny * (Y - cy) - b * s for nx, ny, b in model.edges]
        w = max(vals)
        if w < 0:
            interior |= 1 << u
        elif w == 0:
            boundary.append(u)
            tight[u] = tuple(e for e, v in enumerate(vals) if v == 0)
    return interior, tuple(boundary), tight


def _step_off(model: _Model, base, q0, d):
    """Move from base/q0 along d by half the distance to the nearest sign
    change of a nonzero slack; returns integers (cx, cy, s, q)."""
    if not d:
        return (*base, q0)
    d = [int(v) for v in (Fraction(x) * math.lcm(*(Fraction(y).denominator for y in d)) for x in d)]
    bx, by, bs = base
    # the step t is kept as the fraction num/den
    num, den = 1, 1
    if d[2] < 0:
        num, den = _fmin(num, den, bs, q0 * -d[2])
    for nx, ny, b in model.edges:
        k = nx * bx + ny * by + b * bs
        m = -(nx * d[0] + ny * d[1] + b * d[2])
        if m == 0:
            continue
        for X, Y in model.P:
            v = (nx * X + ny * Y) * q0 - k  # slack times q0
            if v < 0 < m or m < 0 < v:
                num, den = _fmin(num, den, abs(v), q0 * abs(m))
    den *= 2
    return (bx * den + num * q0 * d[0], by * den + num * q0 * d[1],
            bs * den + num * q0 * d[2], q0 * den)


def _fmin(n1, d1, n2, d2):
    return (n2, d2) if n2 * d1 < n1 * d2 else (n1, d1)


@functools.lru_cache(maxsize=16)
def _cached_space(D, S, degenerate, threads):
    return RangeSpace(D, S, degenerate, threads)


def range_space(D: ConvexPolygon, S: PointSet, degenerate: bool = False, threads: int = 1) -> RangeSpace:
    require_general_position(D, S)
    return _cached_space(D, S, degenerate, threads)


# ---------------------------------------------------------------------------
# public operations


def enumerate_pinned_candidates(D: ConvexPolygon, S: PointSet) -> list[PinnedCandidate]:
    require_general_position(D, S)
    sc = scan(D, S)
    return [PinnedCandidate(sc.constraints_of(c), sc.homothet_of(c),
                            indices_of(c.interior), c.boundary)
            for c in sc.candidates]


def realized_range(D: ConvexPolygon, S: PointSet, h: Homothet) -> RangeReport:
    interior, boundary, tight = [], [], {}
    for u, p in enumerate(S.points):
        vals = edge_slacks(D, h, p)
        w = max(vals)
        if w < 0:
            interior.append(u)
        elif w == 0:
            boundary.append(u)
            tight[u] = tuple(e for e, v in enumerate(vals) if v == 0)
    base = mask_of(interior)
    fam = tuple(indices_of(base | b) for b, _ in local_subsets(D.edges, tuple(boundary), tight))
    return RangeReport(tuple(interior), tuple(boundary), h, tuple(f for f in fam if f))


def enumerate_ranges(D: ConvexPolygon, S: PointSet) -> list[tuple[int, ...]]:
    return range_space(D, S).ranges()


def is_delaunay_edge(D: ConvexPolygon, S: PointSet, u: int, v: int) -> bool:
    if u == v:
        raise ValueError("an edge needs two distinct points")
    return range_space(D, S).is_edge(u, v)


def color_masks(coloring) -> dict:
    masks: dict = {}
    for i, c in enumerate(coloring):
        masks[c] = masks.get(c, 0) | (1 << i)
    return masks


def _monochromatic(mask: int, coloring, classes) -> bool:
    low = (mask & -mask).bit_length() - 1
    return mask & ~classes[coloring[low]] == 0


def max_monochromatic_range(D: ConvexPolygon, S: PointSet, coloring, space: RangeSpace | None = None):
    """Largest realizable range whose points all share one color, with a witness."""
    if len(coloring) != len(S):
        raise ValueError("coloring length does not match the point set")
    if len(S) == 0:
        return 0, None
    space = space or range_space(D, S)
    classes = color_masks(coloring)
    best, best_mask = 0, None
    for m in space.masks:
        size = bin(m).count("1")
        if size > best and _monochromatic(m, coloring, classes):
            best, best_mask = size, m
    return best, space.report(best_mask)


def exists_monochromatic_superrange(D: ConvexPolygon, S: PointSet, coloring, T0,
                                    space: RangeSpace | None = None):
    """Is some monochromatic realizable range a superset of T0? Returns (flag, report)."""
    space = space or range_space(D, S)
    target = mask_of(T0)
    classes = color_masks(coloring)
    if target and not _monochromatic(target, coloring, classes):
        # no superset of a two-colored set is monochromatic
        return False, None
    for m in space.masks:
        if m & target == target and _monochromatic(m, coloring, classes):
            return True, space.report(m)
    return False, None
