"""polycolor command line.

Exit codes: 0 success (and verified), 1 verification failed, 2 bad input or
a violated precondition.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import docio
from .delaunay import build_dt, check_dt_properties
from .docio import DocumentError, InstanceDocument, fmt, fmt_homothet, fmt_pair
from .geometry import GeneralPositionError, general_position_check, perturb, verify_general_position
from .lowerbound import (
    Rect,
    SearchTooLarge,
    build_H,
    check_unavoidable,
    hextant_embed,
    hextant_range_check,
    realize_verified,
    rect_to_hextant,
)
from .pipeline import InfeasibleSelection, PreconditionError, color_points
from .ranges import indices_of, mask_of, max_monochromatic_range, range_space
from .render import render_svg

log = logging.getLogger("polycolor")


class UsageError(Exception):
    pass


def _emit(doc, args) -> None:
    text = docio.dumps(doc)
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _write_svg(args, svg: str) -> None:
    if args.svg:
        Path(args.svg).write_text(svg)


def load_instance(args) -> InstanceDocument:
    doc = docio.read_json(args.instance) if args.instance else {}
    if not isinstance(doc, dict):
        raise DocumentError("an instance document is a JSON object")
    doc = dict(doc)
    if args.polygon:
        doc["polygon"] = args.polygon if args.polygon in docio.PRESETS else docio.read_json(args.polygon)
    if args.points:
        doc["points"] = docio.read_json(args.points)
    if getattr(args, "colors", None):
        doc["colors"] = docio.read_json(args.colors)
    if "polygon" not in doc:
        raise DocumentError("no polygon given (use --polygon FILE|square|triangle or an instance file)")
    inst = InstanceDocument.from_json(doc)
    # command-line flags override document parameters
    if getattr(args, "t", None) is not None:
        inst.params["t"] = args.t
    if getattr(args, "cd", None) is not None:
        inst.params["c_D"] = docio.parse_q(args.cd)
    if getattr(args, "eps", None) is not None:
        inst.params["eps"] = docio.parse_q(args.eps)
    if getattr(args, "seed", None) is not None:
        inst.params["seed"] = args.seed
    return inst


def verified_points(inst: InstanceDocument, args):
    """The instance's points checked for general position, perturbed only if
    --perturb was given."""
    D, S = inst.D(), inst.S()
    verdict = general_position_check(D, S)
    if verdict.ok:
        return D, verify_general_position(D, S), False
    if args.perturb is None:
        raise GeneralPositionError(verdict.describe() + " (pass --perturb Q to perturb)", verdict)
    mag = docio.parse_q(args.perturb)
    seed = inst.params.get("seed", 0)
    for k in range(20):
        cand = perturb(S, mag, seed + k)
        if general_position_check(D, cand).ok:
            print(f"warning: {verdict.describe()}; points perturbed by at most {fmt(mag)}", file=sys.stderr)
            return D, verify_general_position(D, cand), True
    raise GeneralPositionError("perturbation did not reach general position", verdict)


def cmd_dt(args) -> int:
    inst = load_instance(args)
    D, S, moved = verified_points(inst, args)
    space = range_space(D, S, threads=args.threads)
    G = build_dt(D, S, space)
    doc = {
        "vertices": G.n,
        "edges": [list(e) for e in G.edges],
        "faces": [list(f) for f in G.faces],
        "outer_face": G.outer,
    }
    if moved:
        doc["points"] = [fmt_pair(p) for p in S.points]
    code = 0
    if args.check:
        rep = check_dt_properties(G, D, S, space)
        doc["checks"] = {"ok": rep.ok, "summary": rep.summary()}
        code = 0 if rep.ok else 1
    _emit(doc, args)
    _write_svg(args, render_svg(S.points, G.edges, title="Delaunay graph"))
    return code


def cmd_ranges(args) -> int:
    inst = load_instance(args)
    D, S, moved = verified_points(inst, args)
    space = range_space(D, S, threads=args.threads)
    if args.witness:
        items = []
        for m in space.masks:
            items.append({"range": list(indices_of(m)), "witness": fmt_homothet(space.witness(m))})
        doc = {"count": len(space), "ranges": items}
    else:
        doc = {"count": len(space), "ranges": [list(r) for r in space.ranges()]}
    if moved:
        doc["points"] = [fmt_pair(p) for p in S.points]
    _emit(doc, args)
    return 0


def cmd_color(args) -> int:
    inst = load_instance(args)
    D, S = inst.D(), inst.S()
    mag = docio.parse_q(args.perturb) if args.perturb is not None else None
    seed = inst.params.get("seed", 0)
    with warnings.catch_warnings():
        # reported below through the diagnostics instead
        warnings.simplefilter("ignore")
        res = color_points(D, S, t=inst.params.get("t"), c_D=inst.params.get("c_D"),
                           perturb_magnitude=mag, seed=seed, threads=args.threads)
    if res.points != S:
        print(f"warning: {res.diagnostics[0]}", file=sys.stderr)
    p = res.params
    big = res.largest_monochromatic
    doc = InstanceDocument(inst.polygon, res.points.points, res.coloring).to_json()
    doc.update({
        "t": p.t,
        "n_sides": p.n,
        "m_empirical": p.m_empirical,
        "m_formula": p.m_formula,
        "R": list(res.plan.R),
        "recolored": {str(r): {"section": s, "old": o, "new": nw} for r, (s, o, nw) in res.plan.entries.items()},
        "sections": [
            {"path": s.path_id, "vertices": list(s.vertices), "cutable": s.cutable,
             "witness": fmt_homothet(s.witness) if s.witness else None}
            for s in res.sections
        ],
        "lemma_conditions": {"ok": res.lemma.ok, "detail": res.lemma.describe()},
        "largest_monochromatic": {
            "size": len(big.interior) if big else 0,
            "range": list(big.interior) if big else [],
            "witness": fmt_homothet(big.witness) if big else None,
        },
        "verified": res.verified,
        "diagnostics": res.diagnostics,
    })
    _emit(doc, args)
    _write_svg(args, render_svg(res.points.points, res.graph.edges, res.coloring, title="coloring"))
    return 0 if res.verified else 1


def cmd_verify(args) -> int:
    inst = load_instance(args)
    if inst.colors is None:
        raise DocumentError("no colors given (use --colors FILE or a 'colors' key)")
    D, S, _ = verified_points(inst, args)
    if len(inst.colors) != len(S):
        raise DocumentError(f"{len(inst.colors)} colors for {len(S)} points")
    space = range_space(D, S, threads=args.threads)
    size, rep = max_monochromatic_range(D, S, inst.colors, space=space)
    doc = {
        "largest_monochromatic": size,
        "range": list(rep.interior) if rep else [],
        "witness": fmt_homothet(rep.witness) if rep else None,
    }
    code = 0
    if args.m is not None:
        doc["m"] = args.m
        doc["ok"] = size < args.m
        code = 0 if size < args.m else 1
    _emit(doc, args)
    return code


def cmd_render(args) -> int:
    inst = load_instance(args)
    D, S, _ = verified_points(inst, args)
    space = range_space(D, S, threads=args.threads)
    G = build_dt(D, S, space)
    outlines = []
    if args.witness:
        idx = [int(x) for x in args.witness.split(",") if x.strip()]
        mask = mask_of(idx)
        if mask not in space:
            raise DocumentError(f"{idx} is not a realizable range")
        outlines.append(space.witness(mask).vertices(D))
    if args.largest:
        if inst.colors is None:
            raise DocumentError("--largest needs colors")
        _, rep = max_monochromatic_range(D, S, inst.colors, space=space)
        outlines.append(rep.witness.vertices(D))
    svg = render_svg(S.points, G.edges, inst.colors, outlines, title="instance")
    if args.svg:
        Path(args.svg).write_text(svg)
    else:
        sys.stdout.write(svg)
    return 0


def _hypergraph_doc(H) -> dict:
    return {
        "k": H.k, "l": H.l, "m": H.m,
        "vertices": H.n_vertices,
        "E1": [sorted(e) for e in H.E1],
        "E2": [sorted(e) for e in H.E2],
        "E3": [sorted(e) for e in H.E3],
    }


def cmd_hypergraph(args) -> int:
    if min(args.k, args.l, args.m) < 1:
        raise UsageError("k, l, m must be positive")
    if args.action == "build":
        _emit(_hypergraph_doc(build_H(args.k, args.l, args.m)), args)
        return 0
    if args.action == "check":
        H = build_H(args.k, args.l, args.m)
        v = check_unavoidable(H, guard=args.guard)
        doc = {"k": H.k, "l": H.l, "m": H.m, "vertices": H.n_vertices,
               "unavoidable": v.unavoidable, "avoiding_coloring": v.coloring}
        _emit(doc, args)
        return 0 if v.unavoidable else 1
    eps = docio.parse_q(args.eps) if args.eps is not None else Fraction(1, 8)
    real, verdict, halvings = realize_verified(args.k, args.l, args.m, eps)
    doc = {
        "k": args.k, "l": args.l, "m": args.m,
        "eps": real.eps,
        "halvings": halvings,
        "points": [[fmt(c) for c in p] for p in real.points],
        "balls": [{"center": [fmt(c) for c in b.center], "radius": b.radius} for b in real.balls],
        "verified": verdict.ok,
        "min_margin": verdict.min_margin,
        "detail": verdict.describe(),
    }
    _emit(doc, args)
    return 0 if verdict.ok else 1


def cmd_embed_hextant(args) -> int:
    src = args.points or args.instance
    if not src:
        raise DocumentError("no points given")
    pts = docio.parse_points(docio.read_json(src))
    doc = {"points4": [[fmt(c) for c in q] for q in hextant_embed(pts)]}
    code = 0
    if args.rect:
        vals = [docio.parse_q(v) for v in args.rect.split(",")]
        if len(vals) != 4:
            raise UsageError("--rect takes u_lo,u_hi,v_lo,v_hi")
        rect = Rect(*vals)
        hx = rect_to_hextant(rect)
        ok = hextant_range_check(pts, rect, hx)
        doc["hextant"] = [hx.x0, hx.y0, hx.z0, hx.w0]
        doc["inside"] = [i for i, q in enumerate(hextant_embed(pts)) if hx.contains(q)]
        doc["correspondence"] = ok
        code = 0 if ok else 1
    _emit(doc, args)
    return code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", nargs="?", help="instance document (JSON)")
    common.add_argument("--polygon", help="polygon file, or a preset: square, triangle")
    common.add_argument("--points", help="points file")
    common.add_argument("--colors", help="colors file")
    common.add_argument("--seed", type=int, default=None, help="seed for perturbation (default 0)")
    common.add_argument("--t", type=int, default=None, help="section parameter (default 4n+12)")
    common.add_argument("--cd", default=None, help="self-cover constant c_D, for the m formula")
    common.add_argument("--m", type=int, default=None, help="threshold for verify")
    common.add_argument("--eps", default=None, help="root epsilon for ball realizations")
    common.add_argument("--perturb", default=None, help="perturb non-general-position input by at most Q")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--svg", default=None, help="also write an SVG drawing here")
    common.add_argument("-o", "--output", default=None, help="write the JSON result here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="polycolor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dt", parents=[common], help="Delaunay graph of the points")
    p.add_argument("--check", action="store_true", help="run the structural checks")
    p.set_defaults(func=cmd_dt)

    p = sub.add_parser("ranges", parents=[common], help="all realizable ranges")
    p.add_argument("--witness", action="store_true", help="include a witness homothet per range")
    p.set_defaults(func=cmd_ranges)

    p = sub.add_parser("color", parents=[common], help="3-color with no large monochromatic homothet")
    p.set_defaults(func=cmd_color)

    p = sub.add_parser("verify", parents=[common], help="largest monochromatic range of a coloring")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", parents=[common], help="SVG drawing of an instance")
    p.add_argument("--witness", default=None, help="draw the witness of this range (comma-separated indices)")
    p.add_argument("--largest", action="store_true", help="draw the largest monochromatic range's witness")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("hypergraph", parents=[common], help="the hypergraphs H(k,l,m)")
    p.add_argument("action", choices=["build", "check", "realize"])
    p.add_argument("k", type=int)
    p.add_argument("l", type=int)
    p.add_argument("m_", metavar="m", type=int)
    p.add_argument("--guard", type=int, default=24, help="largest vertex count for the search")
    p.set_defaults(func=cmd_hypergraph)

    p = sub.add_parser("embed-hextant", parents=[common], help="lift planar points to R^4")
    p.add_argument("--rect", default=None, help="u_lo,u_hi,v_lo,v_hi: also compare with its hextant")
    p.set_defaults(func=cmd_embed_hextant)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "hypergraph":
        # the positional m and the --m flag share a name; keep them apart
        args.threshold, args.m = args.m, args.m_
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (DocumentError, GeneralPositionError, PreconditionError, UsageError, SearchTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasibleSelection as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
