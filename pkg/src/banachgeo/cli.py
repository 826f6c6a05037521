"""Command-line front end.

One verb per library operation family:

    build       space file/preset -> validated space JSON
    norm        norm of a point
    jset        extreme supporting functionals at a point
    orth        exact BJ-orthogonality of a pair
    eps-orth    approximate orthogonality (both procedures)
    preserves   operator preservation, at a point or globally
    epsilon-x   the space screening constant
    neighbors   neighboring cone regions of a facet
    isometry    scalar-isometry detection
    experiment  run a registered experiment (or --all)
    render      SVG of a 2-d unit ball

Exit codes: 0 all verdicts pass, 1 some verdict fails, 2 usage or input
error.
"""

import argparse
import json
import sys

import numpy as np

from . import cones, experiments, io, operators, orthogonality, render, spaces
from .errors import BanachGeoError


def _parse_point(text, space):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if space is not None and space.is_exact:
        return parts
    return [float(p) for p in parts]


def _load_space(args):
    if getattr(args, "preset", None):
        return spaces.preset_from_string(args.preset, mode=args.mode)
    if getattr(args, "space", None):
        return io.space_from_dict(io.load_json(args.space))
    raise BanachGeoError("need --preset or --space")


def _emit(args, payload, human_lines):
    if args.json:
        text = json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"
    else:
        text = "\n".join(human_lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg_from(args, eps=0.0):
    return orthogonality.OrthoConfig(epsilon=eps, tol=args.tol)


def cmd_build(args):
    if args.preset:
        space = spaces.preset_from_string(args.preset, mode=args.mode)
    else:
        data = io.load_json(args.space)
        space = io.space_from_dict(data)
    spaces.validate_space(space)
    payload = io.space_to_dict(space)
    payload["facets"] = len(space.dual_vertices) if space.kind == "polyhedral" else None
    _emit(args, payload, [
        f"kind: {space.kind}, dim {space.dim}",
        f"vertices: {len(space.vertices) if space.kind == 'polyhedral' else '-'}",
        f"facets: {payload['facets']}",
    ])
    return 0


def cmd_norm(args):
    space = _load_space(args)
    value = spaces.norm(space, _parse_point(args.point, space))
    _emit(args, {"norm": float(value)}, [f"{float(value):.12g}"])
    return 0


def cmd_jset(args):
    space = _load_space(args)
    ss = spaces.support_set(space, _parse_point(args.point, space))
    payload = {
        "norm": float(ss.value),
        "count": len(ss.extremes),
        "indices": ss.indices,
        "functionals": [[float(c) for c in f.coeffs] for f in ss.extremes],
        "smoothness_order": spaces.smoothness_order(
            space, _parse_point(args.point, space)
        ),
    }
    lines = [f"norm {payload['norm']:.12g}, {payload['count']} extreme functionals,"
             f" smoothness order {payload['smoothness_order']}"]
    for f in payload["functionals"]:
        lines.append("  " + ", ".join(f"{c:.9g}" for c in f))
    _emit(args, payload, lines)
    return 0


def cmd_orth(args):
    space = _load_space(args)
    cfg = _cfg_from(args)
    x = _parse_point(args.x, space)
    y = _parse_point(args.y, space)
    holds = orthogonality.is_bj_orthogonal(space, x, y, cfg)
    _emit(args, {"orthogonal": holds}, ["orthogonal" if holds else "not orthogonal"])
    return 0 if holds else 1


def cmd_eps_orth(args):
    space = _load_space(args)
    cfg = _cfg_from(args, eps=args.epsilon)
    x = _parse_point(args.x, space)
    y = _parse_point(args.y, space)
    margin = orthogonality.eps_orthogonal_margin(space, x, y, cfg)
    holds = margin >= -cfg.tol
    payload = {"holds": bool(holds), "margin": float(margin)}
    if args.definitional:
        dmargin = orthogonality.definitional_margin(space, x, y, cfg)
        payload["definitional_margin"] = float(dmargin)
        payload["definitional_holds"] = bool(dmargin >= -cfg.tol)
    lines = [f"{'holds' if holds else 'fails'} (margin {float(margin):.3e})"]
    if args.definitional:
        lines.append(
            f"definitional: {'holds' if payload['definitional_holds'] else 'fails'}"
            f" (margin {payload['definitional_margin']:.3e})"
        )
    _emit(args, payload, lines)
    return 0 if holds else 1


def cmd_preserves(args):
    T = io.operator_from_dict(io.load_json(args.operator))
    cfg = operators.OpConfig(tol=args.tol, seed=args.seed)
    if args.at:
        x = _parse_point(args.at, T.domain)
        v = operators.preserves_eps_at(T, x, args.epsilon, cfg)
    else:
        v = operators.preserves_eps_global(T, args.epsilon, cfg)
    payload = {
        "holds": v.holds, "margin": v.margin, "method": v.method,
        "checked": v.checked,
    }
    if v.witness is not None:
        payload["witness"] = {
            "x": [float(c) for c in v.witness[0]],
            "y": [float(c) for c in v.witness[1]],
            "margin": v.witness[2],
        }
    _emit(args, payload, [
        f"{'holds' if v.holds else 'fails'} (margin {v.margin:.3e},"
        f" method {v.method}, {v.checked} evaluations)",
    ])
    return 0 if v.holds else 1


def cmd_epsilon_x(args):
    space = _load_space(args)
    detail = orthogonality.epsilon_x_detail(space)
    payload = {
        "epsilon_x": detail.value,
        "formula_value": detail.formula_value,
        "overridden": detail.overridden,
    }
    lines = [f"epsilon_X = {detail.value:.12g}"]
    if detail.overridden:
        lines.append(
            f"(sequence-space stipulation; swept pair value "
            f"{detail.formula_value if detail.formula_value is not None else 'n/a'})"
        )
    _emit(args, payload, lines)
    return 0


def cmd_neighbors(args):
    space = _load_space(args)
    nb = cones.neighbors(space, args.facet)
    _emit(args, {"facet": args.facet, "neighbors": nb},
          [f"facet {args.facet}: {len(nb)} neighbors: {nb}"])
    return 0


def cmd_isometry(args):
    T = io.operator_from_dict(io.load_json(args.operator))
    k = operators.is_scalar_isometry(T, operators.OpConfig(tol=args.tol))
    payload = {"scalar_isometry": k is not None, "scale": k}
    _emit(args, payload,
          ["not a scalar isometry" if k is None else f"scalar isometry, k = {k:.12g}"])
    return 0


def cmd_experiment(args):
    ids = sorted(experiments.EXPERIMENTS) if args.all else [args.id]
    if not args.all and args.id not in experiments.EXPERIMENTS:
        raise BanachGeoError(
            f"unknown experiment {args.id!r}; known: {sorted(experiments.EXPERIMENTS)}"
        )
    ok = True
    docs = []
    lines = []
    for eid in ids:
        rec = experiments.run_experiment(eid, seed=args.seed, tol=args.tol)
        ok = ok and rec.passed
        docs.append(experiments.report_dict(rec))
        lines.append(f"{eid}: {'PASS' if rec.passed else 'FAIL'} ({rec.runtime_ms} ms)")
        for v in rec.verdicts:
            lines.append(
                f"  {'ok  ' if v['holds'] else 'FAIL'} {v['name']}"
                f" (margin {v['margin']:.3e})"
            )
    payload = docs[0] if len(docs) == 1 else docs
    _emit(args, payload, lines)
    return 0 if ok else 1


def cmd_render(args):
    space = _load_space(args)
    opts = render.RenderOptions(
        show_cones=args.cones,
        marked_points=[_parse_point(p, None) for p in (args.mark or [])],
        show_orth_directions=args.orth_directions,
    )
    svg = render.render_ball_svg(space, opts)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="float")
    common.add_argument("--tol", type=float, default=spaces.DEFAULT_TOL)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="emit JSON")
    ap = argparse.ArgumentParser(
        prog="banachgeo",
        description="Geometry of finite-dimensional normed spaces: orthogonality, "
        "cones, and operator preservation checks.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_space_opts(p):
        p.add_argument("--preset", help='e.g. "linf(3)", "regular_2n_gon(4)"')
        p.add_argument("--space", help="space JSON file")
        p.add_argument("--out", help="write output here")

    p = sub.add_parser("build", parents=[common], help="build/validate a space")
    add_space_opts(p)
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("norm", parents=[common], help="norm of a point")
    add_space_opts(p)
    p.add_argument("--point", required=True)
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("jset", parents=[common], help="supporting functionals at a point")
    add_space_opts(p)
    p.add_argument("--point", required=True)
    p.set_defaults(fn=cmd_jset)

    p = sub.add_parser("orth", parents=[common], help="BJ-orthogonality of a pair")
    add_space_opts(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(fn=cmd_orth)

    p = sub.add_parser("eps-orth", parents=[common], help="approximate orthogonality of a pair")
    add_space_opts(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--definitional", action="store_true",
                   help="also run the deficit-minimization procedure")
    p.set_defaults(fn=cmd_eps_orth)

    p = sub.add_parser("preserves", parents=[common], help="operator preservation check")
    p.add_argument("--operator", required=True, help="operator JSON file")
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--at", help="check at this point only")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_preserves)

    p = sub.add_parser("epsilon-x", parents=[common], help="screening constant of a space")
    add_space_opts(p)
    p.set_defaults(fn=cmd_epsilon_x)

    p = sub.add_parser("neighbors", parents=[common], help="neighboring cone regions")
    add_space_opts(p)
    p.add_argument("--facet", type=int, required=True)
    p.set_defaults(fn=cmd_neighbors)

    p = sub.add_parser("isometry", parents=[common], help="scalar-isometry detection")
    p.add_argument("--operator", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_isometry)

    p = sub.add_parser("experiment", parents=[common], help="run a registered experiment")
    p.add_argument("id", nargs="?", help="experiment id")
    p.add_argument("--all", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("render", parents=[common], help="SVG of a 2-d unit ball")
    add_space_opts(p)
    p.add_argument("--cones", action="store_true")
    p.add_argument("--mark", action="append", help="point to mark (repeatable)")
    p.add_argument("--orth-directions", action="store_true")
    p.set_defaults(fn=cmd_render)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.command == "experiment" and not args.all and not args.id:
        sys.stderr.write("experiment: need an id or --all\n")
        return 2
    try:
        return args.fn(args)
    except BanachGeoError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
