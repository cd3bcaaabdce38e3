"""Command line front end.

Reports go to stdout as JSON lines carrying a `status` field; the one
exception is `rot number`, which prints the bare fraction.  Exit codes:
0 success, 1 validation failure (report still printed), 2 usage error.
All output is deterministic, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .circle import CirclePoint, parse_angle
from .fpp import FixedPointPortrait, enumerate_fpps, fixed_sectors, fpps_up_to_rotation
from .leaves import Polygon, check_invariance, validate_prelamination
from .pullback import canonical_lamination, classify_sector
from .rotation import (
    RotationalOrbit,
    enumerate_rotational_orbits,
    max_to_uni,
    rotation_number,
    uni_to_max,
)
from .docio import (
    LaminationDocument,
    RenderSpec,
    document_from_state,
    format_angle,
    read_document,
    read_portrait,
    write_document,
    write_svg,
)

__all__ = ["main"]

DEFAULT_MAX_DEPTH = 12


class _CliError(Exception):
    """Abort the current command with a specific exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _emit(obj: dict) -> None:
    print(json.dumps(obj))


def _usage(message: str) -> _CliError:
    return _CliError(2, message)


def _invalid(message: str) -> _CliError:
    return _CliError(1, message)


def _check_degree_arg(d: int) -> int:
    if d < 2:
        raise _usage(f"degree must be at least 2, got {d}")
    return d


def _max_depth() -> int:
    raw = os.environ.get("LAMLAB_MAX_DEPTH")
    if raw is None:
        return DEFAULT_MAX_DEPTH
    try:
        cap = int(raw)
    except ValueError:
        raise _usage(f"LAMLAB_MAX_DEPTH must be an integer, got {raw!r}") from None
    if cap < 0:
        raise _usage(f"LAMLAB_MAX_DEPTH must be >= 0, got {cap}")
    return cap


def _parse_points(text: str, d: int) -> tuple[CirclePoint, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise _usage("expected a comma separated list of angles")
    out = []
    for p in parts:
        try:
            out.append(parse_angle(p, d))
        except ValueError as exc:
            raise _usage(str(exc)) from None
    return tuple(out)


def _parse_blocks(text: str) -> tuple[tuple[int, ...], ...]:
    text = text.strip()
    if text in ("", "none"):
        return ()
    blocks = []
    for part in text.split(","):
        try:
            block = tuple(int(i) for i in part.split("-"))
        except ValueError:
            raise _usage(
                f"malformed block {part!r}: expected dash separated indices like 0-1"
            ) from None
        if len(block) < 2:
            raise _usage(f"block {part!r} needs at least two indices")
        blocks.append(block)
    return tuple(blocks)


def _blocks_str(P: FixedPointPortrait) -> str:
    if not P.blocks:
        return "none"
    return ",".join("-".join(str(i) for i in b) for b in P.blocks)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _usage(f"cannot read {path}: {exc}") from None


def _write_text(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise _usage(f"cannot write {path}: {exc}") from None


def _load_document(path: str) -> LaminationDocument:
    text = _read_text(path)
    try:
        return read_document(text)
    except ValueError as exc:
        raise _invalid(f"{path}: {exc}") from None


def _violation_rows(violations) -> list[dict]:
    return [{"kind": v.check, "detail": v.detail} for v in violations]


def _cmd_fpp_enum(args: argparse.Namespace) -> int:
    d = _check_degree_arg(args.degree)
    portraits = fpps_up_to_rotation(d) if args.up_to_rotation else enumerate_fpps(d)
    obj = {
        "status": "ok",
        "degree": d,
        "up_to_rotation": bool(args.up_to_rotation),
        "count": len(portraits),
        "portraits": [[list(b) for b in P.blocks] for P in portraits],
    }
    _emit(obj)
    if args.json:
        _write_text(args.json, json.dumps(obj, indent=2) + "\n")
    return 0


def _cmd_fpp_canonical(args: argparse.Namespace) -> int:
    d = _check_degree_arg(args.degree)
    if args.depth < 0:
        raise _usage("depth must be >= 0")
    cap = _max_depth()
    if args.depth > cap:
        raise _usage(
            f"depth {args.depth} exceeds the safety cap {cap} "
            "(raise LAMLAB_MAX_DEPTH to go deeper)"
        )
    blocks = _parse_blocks(args.fpp)
    try:
        P = FixedPointPortrait(d, blocks)
    except ValueError as exc:
        raise _usage(str(exc)) from None
    try:
        state = canonical_lamination(P, args.depth)
    except ValueError as exc:
        raise _invalid(str(exc)) from None
    command = f"fpp canonical --degree {d} --fpp {_blocks_str(P)} --depth {args.depth}"
    doc = document_from_state(state, command)
    _write_text(args.out, write_document(doc))
    _emit(
        {
            "status": "ok",
            "out": args.out,
            "degree": d,
            "depth": args.depth,
            "leaves": len(doc.leaves),
        }
    )
    return 0


def _cmd_lam_check(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    L = doc.lamination()
    rc = 0
    pre = validate_prelamination(L)
    _emit(
        {
            "status": "ok" if not pre else "fail",
            "check": "prelamination",
            "degree": doc.degree,
            "leaves": len(doc.leaves),
            "violations": _violation_rows(pre),
        }
    )
    if pre:
        rc = 1
    if args.against:
        other = _load_document(args.against)
        try:
            inv = check_invariance(L, other.lamination())
        except ValueError as exc:
            _emit({"status": "fail", "check": "invariance", "error": str(exc)})
            return 1
        _emit(
            {
                "status": "ok" if not inv else "fail",
                "check": "invariance",
                "against": args.against,
                "violations": _violation_rows(inv),
            }
        )
        if inv:
            rc = 1
    return rc


def _cmd_rot_orbits(args: argparse.Namespace) -> int:
    d = _check_degree_arg(args.degree)
    q = args.period
    if q < 1:
        raise _usage("period must be >= 1")
    p = None
    if args.rotation is not None:
        try:
            rho = Fraction(args.rotation)
        except (ValueError, ZeroDivisionError):
            raise _usage(f"malformed rotation number {args.rotation!r}") from None
        if rho.denominator != q or not 0 <= rho < 1:
            raise _usage(
                f"rotation {args.rotation} is not of the form p/{q} in lowest terms"
            )
        p = rho.numerator
    try:
        orbits = enumerate_rotational_orbits(d, q, p)
    except ValueError as exc:
        raise _usage(str(exc)) from None
    _emit(
        {
            "status": "ok",
            "degree": d,
            "period": q,
            "rotation": None if p is None else f"{p}/{q}",
            "count": len(orbits),
            "orbits": [
                {
                    "points": [format_angle(x) for x in o.points],
                    "rotation": str(o.rotation),
                }
                for o in orbits
            ],
        }
    )
    return 0


def _cmd_rot_number(args: argparse.Namespace) -> int:
    d = _check_degree_arg(args.degree)
    pts = _parse_points(args.points, d)
    try:
        rho = rotation_number(d, pts)
    except ValueError as exc:
        raise _invalid(str(exc)) from None
    print(rho)
    return 0


def _correspondence_obj(pair) -> dict:
    return {
        "status": "ok",
        "polygon": [format_angle(x) for x in pair.polygon.points],
        "rotation": str(pair.polygon.rotation),
        "local_degree": pair.local_degree,
        "all_critical": [format_angle(x) for x in pair.all_critical],
        "max_polygon": [format_angle(x) for x in pair.max_polygon.points],
        "max_rotation": str(pair.max_polygon.rotation),
        "majors": [[format_angle(l.a), format_angle(l.b)] for l in pair.majors],
        "coroots": [format_angle(x) for x in pair.coroots],
    }


def _cmd_corr_uni_to_max(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    pts = _parse_points(args.polygon, doc.degree)
    try:
        state = doc.pullback_state()
        orb = RotationalOrbit(doc.degree, pts)
        pair = uni_to_max(state, orb)
    except ValueError as exc:
        raise _invalid(str(exc)) from None
    _emit(_correspondence_obj(pair))
    return 0


def _cmd_corr_max_to_uni(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    pts = _parse_points(args.polygon, doc.degree)
    try:
        state = doc.pullback_state()
        gon = Polygon(pts)
        pair = max_to_uni(state, gon)
    except ValueError as exc:
        raise _invalid(str(exc)) from None
    _emit(_correspondence_obj(pair))
    return 0


def _cmd_classify(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    ptext = _read_text(args.portrait)
    try:
        C = read_portrait(ptext)
    except ValueError as exc:
        raise _invalid(f"{args.portrait}: {exc}") from None
    if C.degree != doc.degree:
        raise _invalid(
            f"portrait degree {C.degree} disagrees with document degree {doc.degree}"
        )
    P = doc.fpp if doc.fpp is not None else FixedPointPortrait(doc.degree, ())
    L = doc.lamination()
    rc = 0
    for i, S in enumerate(fixed_sectors(P)):
        try:
            res = classify_sector(L, C, S)
        except ValueError as exc:
            _emit({"status": "fail", "sector": i, "error": str(exc)})
            rc = 1
            continue
        _emit(
            {
                "status": "ok",
                "sector": i,
                "case": res.case,
                "witness_type": res.witness_type,
                "rotation": None if res.rotation is None else str(res.rotation),
                "subtended": [o.subtended for o in res.objects],
                "witness": [format_angle(x) for x in res.witness.vertices],
            }
        )
    return rc


def _cmd_render(args: argparse.Namespace) -> int:
    doc = _load_document(args.file)
    try:
        spec = RenderSpec(size=args.size, style=args.style, labels=args.labels)
    except ValueError as exc:
        raise _usage(str(exc)) from None
    try:
        svg = write_svg(doc, spec)
    except ValueError as exc:
        raise _invalid(str(exc)) from None
    _write_text(args.out, svg)
    _emit({"status": "ok", "out": args.out, "leaves": len(doc.leaves)})
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lamlab",
        description="Invariant laminations under angle d-tupling, exactly.",
    )
    parser.add_argument("--version", action="version", version=f"lamlab {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    fpp = top.add_parser("fpp", help="fixed point portraits")
    fpp_sub = fpp.add_subparsers(dest="op", required=True)
    enum = fpp_sub.add_parser("enum", help="enumerate portraits for a degree")
    enum.add_argument("--degree", type=int, required=True)
    enum.add_argument("--up-to-rotation", action="store_true")
    enum.add_argument("--json", metavar="PATH", help="also write the report here")
    enum.set_defaults(func=_cmd_fpp_enum)
    canon = fpp_sub.add_parser("canonical", help="build the canonical lamination")
    canon.add_argument("--degree", type=int, required=True)
    canon.add_argument(
        "--fpp",
        required=True,
        help="blocks of fixed point indices, e.g. 0-1,2-3; 'none' for no blocks",
    )
    canon.add_argument("--depth", type=int, required=True)
    canon.add_argument("--out", required=True, metavar="PATH")
    canon.set_defaults(func=_cmd_fpp_canonical)

    lam = top.add_parser("lam", help="lamination checks")
    lam_sub = lam.add_subparsers(dest="op", required=True)
    check = lam_sub.add_parser("check", help="validate a lamination document")
    check.add_argument("--file", required=True, metavar="PATH")
    check.add_argument(
        "--against", metavar="PATH", help="later stage to test invariance into"
    )
    check.set_defaults(func=_cmd_lam_check)

    rot = top.add_parser("rot", help="rotational sets")
    rot_sub = rot.add_subparsers(dest="op", required=True)
    orbits = rot_sub.add_parser("orbits", help="enumerate rotational orbits")
    orbits.add_argument("--degree", type=int, required=True)
    orbits.add_argument("--period", type=int, required=True)
    orbits.add_argument("--rotation", metavar="P/Q", help="keep one rotation number")
    orbits.set_defaults(func=_cmd_rot_orbits)
    number = rot_sub.add_parser("number", help="rotation number of a finite set")
    number.add_argument("--degree", type=int, required=True)
    number.add_argument("--points", required=True, metavar="A,B,...")
    number.set_defaults(func=_cmd_rot_number)

    corr = top.add_parser("corr", help="unicritical correspondence")
    corr_sub = corr.add_subparsers(dest="op", required=True)
    u2m = corr_sub.add_parser("uni-to-max", help="q-gon to maximally critical gon")
    u2m.add_argument("--file", required=True, metavar="PATH")
    u2m.add_argument("--polygon", required=True, metavar="A,B,...")
    u2m.set_defaults(func=_cmd_corr_uni_to_max)
    m2u = corr_sub.add_parser("max-to-uni", help="maximally critical gon to q-gon")
    m2u.add_argument("--file", required=True, metavar="PATH")
    m2u.add_argument("--polygon", required=True, metavar="A,B,...")
    m2u.set_defaults(func=_cmd_corr_max_to_uni)

    classify = top.add_parser("classify", help="classify fixed sectors")
    classify.add_argument("--file", required=True, metavar="PATH")
    classify.add_argument("--portrait", required=True, metavar="PATH")
    classify.set_defaults(func=_cmd_classify)

    render = top.add_parser("render", help="draw a document as SVG")
    render.add_argument("--file", required=True, metavar="PATH")
    render.add_argument("--out", required=True, metavar="PATH")
    render.add_argument("--style", choices=("straight", "geodesic"), default="straight")
    render.add_argument("--labels", choices=("dnary", "rational"), default=None)
    render.add_argument("--size", type=int, default=600)
    render.set_defaults(func=_cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except _CliError as exc:
        if exc.code == 2:
            print(f"lamlab: error: {exc.message}", file=sys.stderr)
        else:
            _emit({"status": "fail", "error": exc.message})
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
