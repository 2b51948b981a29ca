"""Command-line front end: ``siamese-flex solve|atlas|deform|tables``."""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .atlas import characteristic_points
from .deformation import (DEFAULT_EPSILON, admissible_interval, flexion_report, natural_path,
                          recommended_base)
from .errors import DomainError, InvalidGonCountError, SiameseError
from .geometry import (FaceParams, SiameseConfig, _lengths, base_length_bounds, build_mesh,
                       export_obj)
from .io import csv_text, dumps17, fmt17
from .roots import solve_heights
from .tables import DEFAULT_RANGES, TABLE_IDS, check_table, compute_table

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2
EXIT_NO_SOLUTION = 3
EXIT_IO = 4
EXIT_INADMISSIBLE = 5

DELTA_SELF_CHECK = 1e-6


class UsageError(Exception):
    pass


def _err(msg):
    print(f"siamese-flex: {msg}", file=sys.stderr)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _gon_count(n):
    if n < 3:
        raise UsageError(f"n must be at least 3, got {n}")
    return n


def _plan(n, l, lt):
    _gon_count(n)
    lo, hi = base_length_bounds(n)
    for name, v in (("l", l), ("l_tilde", lt)):
        if not lo < v < hi:
            raise UsageError(f"{name} = {v} violates 2 sin(pi/2n) < {name} < 2 sin(pi/n), "
                             f"i.e. {fmt17(lo)} < {name} < {fmt17(hi)} for n = {n}")
    return FaceParams(n, l, lt)


def cmd_solve(args):
    plan = _plan(args.n, args.l, args.L)
    sols = solve_heights(plan)
    rows = [(s.x, s.x_tilde, s.residual[0], s.residual[1]) for s in sols]
    if args.json:
        sys.stdout.write(dumps17({
            "plan": {"n": plan.n, "l": plan.l, "l_tilde": plan.l_tilde},
            "regime": sols.regime,
            "solutions": [{"x": r[0], "x_tilde": r[1], "residual": [r[2], r[3]]} for r in rows],
        }))
    elif args.csv:
        sys.stdout.write(csv_text(("x", "x_tilde", "r1", "r2"), rows))
    else:
        print(f"plan n={plan.n} l={plan.l} l_tilde={plan.l_tilde}: {sols.regime} solution(s)")
        for i, r in enumerate(rows, 1):
            print(f"  {i}: x = {r[0]:.10f}  x_tilde = {r[1]:.10f}")
    if not rows:
        _err("no solutions")
        return EXIT_NO_SOLUTION
    return EXIT_OK


def cmd_atlas(args):
    atlas = characteristic_points(_gon_count(args.n))
    text = atlas.to_json()
    if args.out:
        _write(args.out, text)
    elif not args.svg:
        sys.stdout.write(text)
    if args.svg:
        from .figures import atlas_svg

        _write(args.svg, atlas_svg(atlas.n))
    return EXIT_OK


def cmd_deform(args):
    n = _gon_count(args.n)
    l0 = recommended_base(n) if args.auto else args.l0
    lo, hi = base_length_bounds(n)
    if not lo < l0 < hi:
        raise UsageError(f"l0 = {l0} violates 2 sin(pi/2n) < l0 < 2 sin(pi/n), "
                         f"i.e. {fmt17(lo)} < l0 < {fmt17(hi)} for n = {n}")
    report = flexion_report(n, l0, args.epsilon)
    if not report.admissible:
        a, b = admissible_interval(n)
        _err(f"l0 = {l0} is not admissible for n = {n}: need (l_H + l_K)/2 < l0 < l_M, "
             f"i.e. {fmt17(a)} < l0 < {fmt17(b)}")
        return EXIT_INADMISSIBLE

    path = natural_path(n, l0, args.samples)
    if abs(path.dense_max_rel - report.delta_i) > DELTA_SELF_CHECK:
        _err(f"delta_i self-check failed: path {path.dense_max_rel} vs hat points {report.delta_i}")
        return EXIT_CHECK
    out = report.to_dict()
    out["delta_i_path"] = path.dense_max_rel
    out["anchors"] = {f"P{i + 1}": list(p) for i, p in enumerate(path.anchor_points)}
    out["hat_points"] = {"H_hat": list(path.hat_points[0]), "K_hat": list(path.hat_points[1])}
    text = dumps17(out)

    if args.out:
        _write(args.out, path.to_csv())
    if args.report:
        _write(args.report, text)
    else:
        sys.stdout.write(text)
    if args.meshes:
        os.makedirs(args.meshes, exist_ok=True)
        width = len(str(len(path.samples) - 1))
        for i, (x, xt) in enumerate(path.heights):
            # plan recomputed from the heights so every frame closes exactly
            l, lt = _lengths(n, x, xt)
            cfg = SiameseConfig.from_heights(FaceParams(n, l, lt), float(x), float(xt))
            _write(os.path.join(args.meshes, f"frame_{i:0{width}d}.obj"),
                   export_obj(build_mesh(cfg)))
    if args.plot:
        from .figures import deformation_svg

        _write(args.plot, deformation_svg(path))
    return EXIT_OK


def cmd_tables(args):
    artifact = compute_table(args.which, args.n_from, args.n_to, args.format)
    sys.stdout.write(artifact.render())
    if args.check:
        bad = check_table(artifact)
        for m in bad:
            _err(f"mismatch: {m.describe()}")
        if bad:
            return EXIT_CHECK
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="siamese-flex",
                                description="Isomers, rigidity atlas and almost flexions "
                                            "of Siamese dipyramids.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="all dipyramids with the given edge lengths")
    s.add_argument("-n", type=int, required=True, help="gon count (n >= 3)")
    s.add_argument("-l", type=float, required=True, help="base length of the first family")
    s.add_argument("-L", type=float, required=True, help="base length of the second family")
    fmt = s.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    s.set_defaults(func=cmd_solve)

    a = sub.add_parser("atlas", help="characteristic points, singular curve and fold image")
    a.add_argument("-n", type=int, required=True)
    a.add_argument("--out", help="write atlas JSON here instead of stdout")
    a.add_argument("--svg", help="write the U/V figure here")
    a.set_defaults(func=cmd_atlas)

    d = sub.add_parser("deform", help="natural deformation of an equifacial 3-isomer")
    d.add_argument("-n", type=int, required=True)
    base = d.add_mutually_exclusive_group(required=True)
    base.add_argument("--l0", type=float, help="common base length")
    base.add_argument("--auto", action="store_true", help="use the recommended base length")
    d.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="almost-flexion threshold (default %(default)s)")
    d.add_argument("--samples", type=int, default=512, help="path samples (default %(default)s)")
    d.add_argument("--out", help="write the sampled path as CSV")
    d.add_argument("--report", help="write the flexion report JSON here instead of stdout")
    d.add_argument("--meshes", help="directory for one OBJ mesh per sample")
    d.add_argument("--plot", help="write an SVG figure of the path")
    d.set_defaults(func=cmd_deform)

    t = sub.add_parser("tables", help="recompute the reference tables")
    t.add_argument("--which", required=True, choices=TABLE_IDS)
    t.add_argument("--n-from", type=int)
    t.add_argument("--n-to", type=int)
    t.add_argument("--format", choices=("csv", "json", "pretty"), default="csv")
    t.add_argument("--check", action="store_true",
                   help="compare against the printed values; exit 1 on any mismatch")
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "deform" and args.samples < 2:
        parser.error("--samples must be at least 2")
    if args.command == "tables":
        lo = args.n_from if args.n_from is not None else DEFAULT_RANGES[args.which][0]
        hi = args.n_to if args.n_to is not None else DEFAULT_RANGES[args.which][1]
        if lo < 3 or hi < lo:
            parser.error(f"invalid n range {lo}..{hi}")
    try:
        return args.func(args)
    except (UsageError, InvalidGonCountError, DomainError) as exc:
        _err(str(exc))
        return EXIT_USAGE
    except OSError as exc:
        _err(f"I/O error: {exc}")
        return EXIT_IO
    except SiameseError as exc:
        _err(str(exc))
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
