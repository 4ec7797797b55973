"""From a path 3-coloring of DT_D(S) to a coloring with no large
monochromatic homothet: cut long monochromatic paths into sections, recolor
one point in every section that some monochromatic homothet swallows whole.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .delaunay import PlaneGraph, build_dt
from .geometry import (
    ConvexPolygon,
    GeneralPositionError,
    Homothet,
    PointSet,
    as_rational,
    extremal_points,
    general_position_check,
    perturb,
    verify_general_position,
)
from .pathcolor import poh_coloring, verify_path_property
from .ranges import RangeReport, RangeSpace, color_masks, exists_monochromatic_superrange, indices_of, mask_of, max_monochromatic_range, range_space

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """A parameter choice that the recoloring argument cannot work with."""


class InfeasibleSelection(RuntimeError):
    """Some cutable section has no eligible point to recolor."""


def default_t(n_sides: int) -> int:
    return 4 * n_sides + 12


def check_t(t: int, n_sides: int) -> None:
    if t < 4:
        raise PreconditionError(f"t = {t} is below 4")
    if 4 * (n_sides + 3) > t:
        raise PreconditionError(f"t = {t} breaks t/4 >= n+3 for n = {n_sides} (need t >= {4 * (n_sides + 3)})")


@dataclass
class PipelineParams:
    n: int
    t: int
    c: int = 3
    c_D: Fraction | None = None
    m_empirical: int | None = None

    @property
    def m_formula(self) -> Fraction | None:
        if self.c_D is None:
            return None
        return self.c_D * self.c * self.t * (self.t + 3)


@dataclass
class Section:
    path_id: int
    vertices: tuple[int, ...]
    cutable: bool | None = None
    witness: Homothet | None = None


@dataclass
class RecoloringPlan:
    R: tuple[int, ...] = ()
    entries: dict[int, tuple[int, int, int]] = field(default_factory=dict)  # r -> (section, old, new)


def monochromatic_paths(G: PlaneGraph, col) -> list[list[int]]:
    """Components of the color classes, each listed along the path starting
    from its smaller-index endpoint. Requires the path property."""
    verdict = verify_path_property(G, col)
    if not verdict:
        raise ValueError(f"coloring does not have the path property: {verdict}")
    nbrs = [[] for _ in range(G.n)]
    for u, v in G.edges:
        if col[u] == col[v]:
            nbrs[u].append(v)
            nbrs[v].append(u)
    seen = [False] * G.n
    paths = []
    for v in range(G.n):
        # endpoints in index order; the first unseen endpoint of a path is its smaller one
        if seen[v] or len(nbrs[v]) > 1:
            continue
        path, prev, cur = [v], None, v
        seen[v] = True
        while True:
            nxt = [u for u in nbrs[cur] if u != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            seen[cur] = True
            path.append(cur)
        paths.append(path)
    return paths


def section_sizes(length: int, t: int) -> list[int]:
    """Split a path of ``length >= t`` vertices into parts of size in
    [ceil(t/4), floor(t/2)]."""
    hi, lo = t // 2, -(-t // 4)
    k, rem = divmod(length, hi)
    sizes = [hi] * k
    if rem:
        if rem >= lo:
            sizes.append(rem)
        else:
            merged = sizes.pop() + rem
            sizes += [merged // 2, merged - merged // 2]
    if all(lo <= s <= hi for s in sizes):
        return sizes
    # the greedy rule can miss for odd t; fall back to the most even split
    for k in range(math.ceil(length / hi), length // lo + 1):
        q, r = divmod(length, k)
        sizes = [q + 1] * r + [q] * (k - r)
        if lo <= q and q + (r > 0) <= hi:
            return sizes
    raise PreconditionError(f"cannot split {length} vertices into parts of size {lo}..{hi}")


def extract_sections(G: PlaneGraph, col, t: int) -> list[Section]:
    if t < 4:
        raise PreconditionError("t must be at least 4")
    sections = []
    for pid, path in enumerate(monochromatic_paths(G, col)):
        if len(path) < t:
            continue
        start = 0
        for size in section_sizes(len(path), t):
            sections.append(Section(pid, tuple(path[start : start + size])))
            start += size
    return sections


def mark_cutable(D: ConvexPolygon, S: PointSet, col, sections, space: RangeSpace | None = None) -> list[Section]:
    space = space or range_space(D, S)
    out = []
    for sec in sections:
        found, rep = exists_monochromatic_superrange(D, S, col, sec.vertices, space=space)
        out.append(Section(sec.path_id, sec.vertices, found, rep.witness if found else None))
    return out


def next_color(c: int) -> int:
    return c % 3 + 1


def select_R(D: ConvexPolygon, S: PointSet, col, sections, G: PlaneGraph, t: int | None = None) -> RecoloringPlan:
    """One recolorable point per cutable section: not a section endpoint, not
    extremal in the section for any side, not adjacent on its path to an
    earlier choice."""
    if t is not None:
        check_t(t, D.side_count)
    adj = G.adjacency_masks()
    chosen_mask = 0
    plan = RecoloringPlan()
    R = []
    for sid, sec in enumerate(sections):
        if not sec.cutable:
            continue
        verts = sec.vertices
        extremal = {verts[i] for i in extremal_points(D, [S[v] for v in verts]).values()}
        pick = None
        for v in verts[1:-1]:
            if v in extremal:
                continue
            # on a monochromatic path, path neighbors are exactly the same-colored graph neighbors
            same = [u for u in indices_of(adj[v] & chosen_mask) if col[u] == col[v]]
            if same:
                continue
            pick = v
            break
        if pick is None:
            raise InfeasibleSelection(f"section {sid} {verts} has no eligible point")
        chosen_mask |= 1 << pick
        R.append(pick)
        plan.entries[pick] = (sid, col[pick], next_color(col[pick]))
    plan.R = tuple(R)
    return plan


def plan_problems(D: ConvexPolygon, S: PointSet, col, sections, plan: RecoloringPlan, G: PlaneGraph) -> list[str]:
    """Machine check of the plan's invariants; empty list when it is sound."""
    problems = []
    cut = [i for i, s in enumerate(sections) if s.cutable]
    per_section = {}
    for r, (sid, old, new) in plan.entries.items():
        per_section.setdefault(sid, []).append(r)
        sec = sections[sid].vertices
        if r not in sec[1:-1]:
            problems.append(f"{r} is not an inner vertex of section {sid}")
        ext = {sec[i] for i in extremal_points(D, [S[v] for v in sec]).values()}
        if r in ext:
            problems.append(f"{r} is extremal in section {sid}")
        if old != col[r] or new == old:
            problems.append(f"bad color change at {r}")
    if sorted(per_section) != cut or any(len(v) != 1 for v in per_section.values()):
        problems.append("not exactly one point per cutable section")
    Rset = set(plan.R)
    for u, v in G.edges:
        if u in Rset and v in Rset and col[u] == col[v]:
            problems.append(f"{u} and {v} are adjacent on a monochromatic path")
    return problems


def recolor(col, plan: RecoloringPlan) -> list[int]:
    out = list(col)
    for r, (_, old, new) in plan.entries.items():
        if out[r] != old:
            raise ValueError(f"plan expects color {old} at {r}, found {out[r]}")
        out[r] = new
    return out


@dataclass
class LemmaReport:
    ok: bool
    ranges_checked: int
    large_monochromatic_missing_R: tuple[int, ...] | None = None
    R_heavy_without_partner: tuple[int, ...] | None = None

    def describe(self) -> str:
        if self.ok:
            return f"both recoloring conditions hold on {self.ranges_checked} ranges"
        if self.large_monochromatic_missing_R is not None:
            return f"monochromatic range {self.large_monochromatic_missing_R} of size >= t avoids R"
        return f"range {self.R_heavy_without_partner} has t same-colored points of R and no partner outside R"


def check_lemma_conditions(D: ConvexPolygon, S: PointSet, col, R, t: int,
                           space: RangeSpace | None = None) -> LemmaReport:
    """Quantify the two conditions on R over every realizable range (with the
    coloring before recoloring):

    (i) a monochromatic range with at least t points meets R;
    (ii) a range with t points of R of one color also holds a point of
         S \\ R of that color.
    """
    space = space or range_space(D, S)
    Rmask = mask_of(R)
    classes = color_masks(col)
    outside = {c: m & ~Rmask for c, m in classes.items()}
    in_R = {c: m & Rmask for c, m in classes.items()}
    for mask in space.masks:
        size = mask.bit_count()
        if size >= t and not mask & Rmask:
            low = (mask & -mask).bit_length() - 1
            if mask & ~classes[col[low]] == 0:
                return LemmaReport(False, len(space), large_monochromatic_missing_R=indices_of(mask))
        for c in classes:
            if (mask & in_R[c]).bit_count() >= t and not mask & outside[c]:
                return LemmaReport(False, len(space), R_heavy_without_partner=indices_of(mask))
    return LemmaReport(True, len(space))


@dataclass
class ColoringResult:
    coloring: list[int]
    params: PipelineParams
    diagnostics: list[str]
    points: PointSet
    graph: PlaneGraph
    initial: list[int]
    sections: list[Section]
    plan: RecoloringPlan
    lemma: LemmaReport
    largest_monochromatic: RangeReport | None

    @property
    def verified(self) -> bool:
        size = len(self.largest_monochromatic.interior) if self.largest_monochromatic else 0
        return self.lemma.ok and size < self.params.m_empirical


def default_perturbation(S: PointSet) -> Fraction:
    """A thousandth of the smallest nonzero coordinate gap."""
    gaps = [abs(a[k] - b[k]) for i, a in enumerate(S.points) for b in S.points[i + 1:] for k in (0, 1)]
    gaps = [g for g in gaps if g]
    return (min(gaps) if gaps else Fraction(1)) / 1000


def ensure_general_position(D: ConvexPolygon, S: PointSet, magnitude=None, seed: int = 0,
                            attempts: int = 20) -> tuple[PointSet, list[str]]:
    """Return S verified for D, perturbing it (with a warning) if needed."""
    if S.is_verified_for(D):
        return S, []
    verdict = general_position_check(D, S)
    if verdict.ok:
        return verify_general_position(D, S), []
    magnitude = as_rational(magnitude) if magnitude is not None else default_perturbation(S)
    notes = [f"input not in general position ({verdict.describe()}); perturbing by at most {magnitude}"]
    for k in range(attempts):
        cand = perturb(S, magnitude, seed + k)
        if general_position_check(D, cand).ok:
            if k:
                notes.append(f"perturbation seed {seed + k} used")
            warnings.warn(notes[0], stacklevel=3)
            return verify_general_position(D, cand), notes
    raise GeneralPositionError(f"no general-position perturbation found after {attempts} tries", verdict)


def color_points(D: ConvexPolygon, S: PointSet, *, t: int | None = None, c_D=None,
                 perturb_magnitude=None, seed: int = 0, initial=None, threads: int = 1) -> ColoringResult:
    """3-color S so that no large homothet of D is monochromatic.

    ``initial`` replaces the path coloring of the Delaunay graph (it must
    still have the path property); useful for exercising the recoloring step.
    """
    S, diagnostics = ensure_general_position(D, S, perturb_magnitude, seed)
    n = D.side_count
    t = default_t(n) if t is None else t
    check_t(t, n)
    params = PipelineParams(n=n, t=t, c_D=None if c_D is None else as_rational(c_D))
    if len(S) == 0:
        raise ValueError("empty point set")
    space = range_space(D, S, threads=threads)
    G = build_dt(D, S, space)
    col0 = list(initial) if initial is not None else poh_coloring(G)
    sections = extract_sections(G, col0, t)
    sections = mark_cutable(D, S, col0, sections, space)
    plan = select_R(D, S, col0, sections, G, t)
    problems = plan_problems(D, S, col0, sections, plan, G)
    if problems:
        raise InfeasibleSelection("; ".join(problems))
    final = recolor(col0, plan)
    lemma = check_lemma_conditions(D, S, col0, plan.R, t, space)
    size, witness = max_monochromatic_range(D, S, final, space=space)
    params.m_empirical = size + 1
    diagnostics.append(
        f"{len(sections)} sections, {sum(1 for s in sections if s.cutable)} cutable, |R| = {len(plan.R)}"
    )
    diagnostics.append(lemma.describe())
    log.info("colored %d points: t=%d m_empirical=%d", len(S), t, params.m_empirical)
    return ColoringResult(final, params, diagnostics, S, G, col0, sections, plan, lemma, witness)


@dataclass
class IteratedResult:
    colors: list[tuple[int, ...]]
    k: int
    threshold: int  # every range with at least this many points sees >= 2^k colors
    points: PointSet

    @property
    def palette(self) -> set:
        return set(self.colors)


def distinct_color_counts(space: RangeSpace, colors) -> list[tuple[int, int]]:
    """(range size, number of distinct colors) for every realizable range."""
    classes = list(color_masks(colors).values())
    return [(m.bit_count(), sum(1 for c in classes if m & c)) for m in space.masks]


def iterated_coloring(D: ConvexPolygon, S: PointSet, k: int, *, seed: int = 0, threads: int = 1) -> IteratedResult:
    """Color with k-tuples over {1,2,3} by recoloring inside every color class."""
    if k < 1:
        raise ValueError("k must be at least 1")
    S, _ = ensure_general_position(D, S, seed=seed)
    colors: list[tuple[int, ...]] = [()] * len(S)

    def refine(indices, depth):
        if depth == 0 or not indices:
            return
        sub = S.subset(indices)
        res = color_points(D, sub, threads=threads)
        for c in (1, 2, 3):
            cls = [indices[j] for j, cj in enumerate(res.coloring) if cj == c]
            for v in cls:
                colors[v] = colors[v] + (c,)
            refine(cls, depth - 1)

    refine(list(range(len(S))), k)
    space = range_space(D, S, threads=threads)
    need = 2 ** k
    bad = [size for size, count in distinct_color_counts(space, colors) if count < need]
    threshold = max(bad) + 1 if bad else 1
    return IteratedResult(colors, k, threshold, S)
