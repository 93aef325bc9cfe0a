"""Command-line entry point: ``quadtors <command> [flags]``.

Exit status 0 on success, 2 on invalid input, 3 on an internal inconsistency.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .arith import QuadField, format_rat, parse_quad, parse_rat
from .curve import Curve, Point, point_order, tate_normal_form, validate
from .errors import InputError, InternalInconsistency, QuadtorsError
from .paramcheck import consistency, fixture_sha256, load_fixture, verdict_dict
from .scan import ScanConfig, parse_config_text, report, scan, summary, write_outputs
from .torsion import classify_family, point_key, three_torsion, torsion_subgroup, two_torsion

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let values such as -2/9 or -1+sqrt(-3) through as arguments
        self._negative_number_matcher = re.compile(r"^-(\d|sqrt)")


class _Version(argparse.Action):
    def __init__(self, option_strings, dest, **kwargs):
        super().__init__(option_strings, dest, nargs=0, help="print version and fixture hash")

    def __call__(self, parser, namespace, values, option_string=None):
        print(f"quadtors {__version__} (fixture sha256 {fixture_sha256()})")
        parser.exit()


def _field(text: str) -> QuadField:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            K = QuadField.from_int(n)
        except InputError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return K


def _rat(text: str):
    try:
        return parse_rat(text)
    except InputError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, indent=1) if args.json else text)


def _points_text(points) -> list[str]:
    return [str(p) for p in sorted(points, key=point_key)]


def _curve(args) -> Curve:
    c = Curve.short(args.b, args.a)
    validate(c)
    return c


def cmd_torsion(args) -> int:
    c, K = _curve(args), args.d
    g = torsion_subgroup(c, K)
    payload = {
        "curve": str(c),
        "field": str(K),
        "n1": g.n1,
        "n2": g.n2,
        "group": g.label,
        "generators": [str(p) for p in g.generators],
        "points": _points_text(g.points),
    }
    lines = [g.label, f"generators: {', '.join(payload['generators']) or 'none'}"]
    lines += [f"  {p}" for p in payload["points"]]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    K = args.d
    shortlist = classify_family(args.a, K)
    g = torsion_subgroup(_curve(args), K)
    member = g in shortlist
    payload = {
        "curve": str(_curve(args)),
        "field": str(K),
        "case": shortlist.case,
        "shortlist": shortlist.labels(),
        "computed": g.label,
        "member": member,
    }
    text = "\n".join(
        [
            f"shortlist: {{{', '.join(payload['shortlist'])}}}",
            f"computed: {g.label}",
            f"member: {'true' if member else 'false'}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK if member else EXIT_INTERNAL


def _point_list_cmd(finder):
    def run(args) -> int:
        c, K = _curve(args), args.d
        points = _points_text(finder(c, K))
        payload = {"curve": str(c), "field": str(K), "count": len(points), "points": points}
        _emit(args, payload, "\n".join([f"{len(points)} point(s)"] + [f"  {p}" for p in points]))
        return EXIT_OK

    return run


def cmd_order(args) -> int:
    c, K = _curve(args), args.d
    p = Point(parse_quad(args.x, K), parse_quad(args.y, K))
    n = point_order(c, p)
    payload = {"curve": str(c), "point": str(p), "order": n}
    _emit(args, payload, str(n) if n is not None else "non-torsion")
    return EXIT_OK


def cmd_tate(args) -> int:
    c = _curve(args)
    p = Point(parse_rat(args.x), parse_rat(args.y))
    tate, iso = tate_normal_form(c, p)
    b, cc = tate.tate_parameters()
    payload = {
        "curve": str(tate),
        "a1": format_rat(tate.a1),
        "a2": format_rat(tate.a2),
        "a3": format_rat(tate.a3),
        "b": format_rat(b),
        "c": format_rat(cc),
        "iso": {k: format_rat(getattr(iso, k)) for k in ("u", "r", "s", "t")},
        "order": point_order(tate, Point(0, 0)),
    }
    text = "\n".join([str(tate), f"b = {payload['b']}, c = {payload['c']}", f"iso: {iso}"])
    _emit(args, payload, text)
    return EXIT_OK


def cmd_param_check(args) -> int:
    system = load_fixture(args.fixture)
    v = consistency(system, args.field or (), all_quadratic=args.all_fields)
    payload = verdict_dict(v)
    lines = [v.label, f"gcd: {payload['gcd']}"]
    if payload["rational_roots"]:
        lines.append(f"rational roots: {', '.join(payload['rational_roots'])}")
    for d, roots in payload["field_roots"].items():
        lines.append(f"roots in Q(sqrt({d})): {', '.join(roots) or 'none'}")
    if args.all_fields:
        fields = payload["quadratic_fields"]
        lines.append(f"quadratic fields with a root: {', '.join(map(str, fields)) or 'none'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_scan(args) -> int:
    opts = {}
    if args.config:
        try:
            opts = parse_config_text(Path(args.config).read_text())
        except OSError as exc:
            raise InputError(f"cannot read config {args.config}: {exc.strerror}") from None
    overrides = {
        "a_values": tuple(args.a_list) if args.a_list else None,
        "d_min": args.d_min,
        "d_max": args.d_max,
        "parallelism": args.jobs,
        "output": args.out,
        "fmt": args.format,
        "timing": False if args.no_timing else None,
    }
    opts.update({k: v for k, v in overrides.items() if v is not None})
    missing = [k for k in ("a_values", "d_min", "d_max") if k not in opts]
    if missing:
        raise InputError(f"scan needs {', '.join(missing)} (flags or config file)")
    config = ScanConfig(**opts)
    records = scan(config)
    if write_outputs(records, config) is None:
        sys.stdout.write(report(records, config.fmt))
    else:
        print(json.dumps(summary(records), sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quadtors", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action=_Version)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def curve_flags(p, need_b=False, need_d=True):
        p.add_argument("--a", type=_rat, required=True, help="constant coefficient")
        p.add_argument("--b", type=_rat, required=need_b, default=0, help="linear coefficient")
        if need_d:
            p.add_argument("--d", type=_field, required=True, help="field Q(sqrt(D))")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("torsion", help="torsion subgroup over Q(sqrt(d))")
    curve_flags(p)
    p.set_defaults(run=cmd_torsion)

    p = sub.add_parser("classify", help="shortlist for y^2 = x^3 + a with square a")
    p.add_argument("--a", type=_int, required=True)
    p.add_argument("--d", type=_field, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_classify, b=0)

    p = sub.add_parser("two-torsion", help="points of order 2")
    curve_flags(p)
    p.set_defaults(run=_point_list_cmd(two_torsion))

    p = sub.add_parser("three-torsion", help="points of order 3")
    curve_flags(p)
    p.set_defaults(run=_point_list_cmd(three_torsion))

    p = sub.add_parser("order", help="order of a point, or non-torsion")
    curve_flags(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(run=cmd_order)

    p = sub.add_parser("tate", help="Tate normal form centred at a rational point")
    curve_flags(p, need_d=False)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.set_defaults(run=cmd_tate)

    p = sub.add_parser("param-check", help="solvability of a coefficient system in t")
    p.add_argument("--fixture", default=None, help="equation file (default: bundled Z/12 system)")
    p.add_argument("--d", dest="field", type=_field, action="append", help="also search Q(sqrt(D))")
    p.add_argument("--all-fields", action="store_true", help="search every quadratic field")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_param_check)

    p = sub.add_parser("scan", help="sweep y^2 = x^3 + a over a range of d")
    p.add_argument("--a-list", type=_int, nargs="+")
    p.add_argument("--d-min", type=_int)
    p.add_argument("--d-max", type=_int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--jobs", type=_int)
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as 0 for byte-stable output")
    p.set_defaults(run=cmd_scan)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except QuadtorsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
