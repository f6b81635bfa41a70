"""``steklov`` command line.

Exit codes: 0 computed, 1 computed and the answer is no (compare mismatch,
no reconstruction, smoothcheck failing), 2 bad input or usage, 3 an
invariant of the input polygon is violated.  Errors go to stderr as one
JSON object.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import serialization as ser
from .charpoly import TrigPoly, char_poly, poly_compare
from .config import FORMATS, RunConfig, load_config
from .errors import (
    AmbiguousError,
    FamilyError,
    HorizonMismatch,
    NoSolutionError,
    ResolutionError,
    SchemaError,
    SteklovError,
)
from .inverse import FAMILIES, reconstruct
from .numerics import Angle, format_scalar, parse_scalar
from .polygon import PolygonData, normalize_perimeter
from .quasieig import roots
from .search import (
    find_charpoly_collisions_triangles,
    quad_vs_equilateral,
    smooth_candidate_pentagons,
    smooth_check,
)

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _diagnose("UsageError", message, EXIT_USAGE)
        sys.exit(EXIT_USAGE)


def _diagnose(kind: str, message: str, code: int, **extra) -> None:
    payload = {"error": kind, "message": message, "exit": code, **extra}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# input


def _read_input(path: str):
    """Polygon or polynomial, told apart by content (CSV means polynomial)."""
    if path.endswith(".csv"):
        try:
            return ser.poly_from_csv(Path(path).read_text())
        except OSError as exc:
            raise SchemaError(f"cannot read {path}: {exc}") from exc
    data = ser.load_json(path)
    if isinstance(data, dict) and "terms" in data:
        return ser.poly_from_dict(data)
    return normalize_perimeter(ser.polygon_from_dict(data))


def _read_polygon(path: str) -> PolygonData:
    obj = _read_input(path)
    if not isinstance(obj, PolygonData):
        raise SchemaError(f"{path}: expected a polygon, got a polynomial")
    return obj


def _read_poly(path: str, cfg: RunConfig) -> TrigPoly:
    obj = _read_input(path)
    return char_poly(obj, cfg.poly_tol) if isinstance(obj, PolygonData) else obj


# ---------------------------------------------------------------------------
# pretty printing


def _num(x) -> str:
    return format_scalar(x) if isinstance(x, Fraction) else format(float(x), ".12g")


def pretty_poly(P: TrigPoly) -> str:
    parts = []
    for f, c in P.terms:
        arg = "t" if f == 1 else f"{_num(f)} t"
        parts.append(f"{_num(c)} cos({arg})")
    parts.append(_num(P.const))
    return " + ".join(parts).replace("+ -", "- ")


def pretty_polygon(p: PolygonData) -> str:
    if p.n == 0:
        return f"smooth domain, perimeter {_num(p.perimeter)}"
    ls = ", ".join(_num(x) for x in p.lengths)
    angs = ", ".join(f"{_num(a.pi_mult)}pi" if a.is_exact else _num(a.rad) for a in p.angles)
    return f"n={p.n} lengths=({ls}) angles=({angs})"


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_charpoly(args, cfg: RunConfig) -> int:
    P = char_poly(_read_polygon(args.polygon), cfg.poly_tol)
    if cfg.format == "csv":
        _emit(ser.poly_to_csv(P))
    elif cfg.format == "pretty":
        _emit(pretty_poly(P))
    else:
        _emit(ser.dumps(ser.poly_to_dict(P)))
    return EXIT_OK


def cmd_compare(args, cfg: RunConfig) -> int:
    tol = args.tol if args.tol is not None else cfg.poly_tol
    a, b = _read_poly(args.a, cfg), _read_poly(args.b, cfg)
    cmp = poly_compare(a, b, tol)
    verdict = "equal" if cmp.equal else "different"
    if cfg.format == "pretty":
        _emit(verdict)
    elif cfg.format == "csv":
        _emit(ser.rows_to_csv(
            ["verdict", "exact", "demoted", "max_freq_gap", "max_coef_gap"],
            [[verdict, int(cmp.exact), int(cmp.demoted), float(cmp.max_freq_gap), float(cmp.max_coef_gap)]],
        ))
    else:
        _emit(ser.dumps({
            "verdict": verdict,
            "exact": cmp.exact,
            "demoted": cmp.demoted,
            "max_freq_gap": float(cmp.max_freq_gap),
            "max_coef_gap": float(cmp.max_coef_gap),
            "tol": tol,
        }))
    return EXIT_OK if cmp.equal else EXIT_NO


def _known_angle(text: Optional[str]) -> Optional[Angle]:
    if text is None:
        return None
    v = parse_scalar(text)
    if not isinstance(v, Fraction):
        raise SchemaError("--known-angle takes an exact multiple of pi such as 1/5")
    return Angle(pi_mult=v)


def cmd_reconstruct(args, cfg: RunConfig) -> int:
    P = _read_poly(args.input, cfg)
    kwargs: dict = {"tol": cfg.selfcheck_tol}
    if args.family == "triangle":
        kwargs.update(known_angle=_known_angle(args.known_angle), pair_bound=cfg.pair_bound)
    elif args.known_angle is not None:
        raise UsageError("--known-angle only applies to --family triangle")
    code = EXIT_OK
    try:
        res = reconstruct(P, args.family, **kwargs)
        out = ser.result_to_dict(res)
        if not res.candidates:
            code = EXIT_NO
    except AmbiguousError as exc:
        out = {
            "classification": "Ambiguous",
            "notes": [exc.case, str(exc)],
            "candidates": [ser.polygon_to_dict(p) for p in exc.candidates],
        }
    except (NoSolutionError, FamilyError) as exc:
        out = {"classification": "NotInFamily" if isinstance(exc, FamilyError) else "NoSolution",
               "notes": [str(exc)], "candidates": []}
        code = EXIT_NO
    out = {"family": args.family, **out}
    if cfg.format == "pretty":
        lines = [f"{out['family']}: {out['classification']} ({len(out['candidates'])} candidate(s))"]
        lines += ["  " + pretty_polygon(ser.polygon_from_dict(c)) for c in out["candidates"]]
        _emit("\n".join(lines))
    elif cfg.format == "csv":
        rows = []
        for i, c in enumerate(out["candidates"]):
            for j, (e, a) in enumerate(zip(c["edges"], c["angles"])):
                rows.append([i, j, str(e["len"]), str(a.get("pi_mult", a.get("rad")))])
        _emit(ser.rows_to_csv(["candidate", "edge", "length", "angle"], rows))
    else:
        _emit(ser.dumps(out))
    return code


def cmd_search(args, cfg: RunConfig) -> int:
    if args.what == "triangles":
        rep = find_charpoly_collisions_triangles(args.qmax or cfg.q_max, cfg.poly_tol)
        header = ["group", "member", "a1", "a2", "a3"]
        rows = [
            [g, i, *(format_scalar(a.pi_mult) for a in T.angles)]
            for g, h in enumerate(rep.hits)
            for i, T in enumerate(h.items)
        ]
    elif args.what == "quadvseq":
        rep = quad_vs_equilateral(args.indexmax or cfg.index_max)
        header = ["k", "j", "opposite_parity", "formal_poly_is_cos_t_plus_1", "min_residual", "feasible"]
        rows = []
        for h in rep.hits:
            i = h.info
            res = "" if i["min_residual"] is None else format(float(i["min_residual"]), ".17g")
            rows.append([i["k"], i["j"], int(i["opposite_parity"]), int(i["formal_poly_is_cos_t_plus_1"]),
                         res, int(bool(i["feasible"]))])
    else:
        rep = smooth_candidate_pentagons(args.qmax or 14, odd_angle=args.odd)
        if args.odd:
            header = ["l3", "l4", "l5", "l1+l2"]
            rows = [[format_scalar(x) for x in h.items] for h in rep.hits]
        else:
            header = ["l1", "l2", "l3", "l4", "l5", "lstar_size"]
            rows = [[*(format_scalar(x) for x in h.items), h.info["lstar_size"]] for h in rep.hits]
    if cfg.format == "csv":
        _emit(ser.rows_to_csv(header, rows))
    elif cfg.format == "pretty":
        _emit("\n".join([" ".join(header)] + [" ".join(str(x) for x in r) for r in rows]))
    else:
        _emit(ser.dumps(ser.report_to_dict(rep)))
    return EXIT_OK


def cmd_roots(args, cfg: RunConfig) -> int:
    P = _read_poly(args.input, cfg)
    T = args.T if args.T is not None else cfg.horizon
    step = args.step if args.step is not None else cfg.step
    spec = roots(P, T, step)
    if cfg.format == "csv":
        _emit(ser.spectrum_to_csv(spec))
    elif cfg.format == "pretty":
        _emit("\n".join(f"{r:.12f}" + (" (tangential)" if t else "") for r, t in zip(spec.roots, spec.tangential))
              or "no roots")
    else:
        _emit(ser.dumps(ser.spectrum_to_dict(spec)))
    return EXIT_OK


def cmd_smoothcheck(args, cfg: RunConfig) -> int:
    rep = smooth_check(_read_polygon(args.polygon), vs_equilateral=args.vs_equilateral, tol=cfg.closure_tol)
    if cfg.format == "csv":
        _emit(ser.rows_to_csv(["condition", "holds"], [[k, int(v)] for k, v in rep.conditions.items()]))
    elif cfg.format == "pretty":
        lines = [f"{k}: {'yes' if v else 'no'}" for k, v in rep.conditions.items()]
        lines.append("candidate" if rep.passed else "distinguished")
        _emit("\n".join(lines))
    else:
        _emit(ser.dumps({**ser.report_to_dict(rep), "passed": rep.passed}))
    return EXIT_OK if rep.passed else EXIT_NO


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="output format (default from config: json)")
    common.add_argument("--config", default=None, help="JSON config file (default: $STEKLOV_CONFIG)")

    parser = _Parser(prog="steklov", description="Steklov characteristic polynomials of convex polygons.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("charpoly", parents=[common], help="characteristic polynomial of a polygon")
    p.add_argument("polygon")
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("compare", parents=[common], help="compare two polynomials (or polygons)")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("reconstruct", parents=[common], help="recover polygons from a polynomial")
    p.add_argument("input")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--known-angle", default=None, help="one angle as a multiple of pi, e.g. 1/5")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("search", parents=[common], help="enumerations")
    p.set_defaults(func=cmd_search)
    ss = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    t = ss.add_parser("triangles", parents=[common], help="triangles with equal polynomials")
    t.add_argument("--qmax", type=int, default=None)
    t = ss.add_parser("quadvseq", parents=[common], help="quadrilaterals against the equilateral triangle")
    t.add_argument("--indexmax", type=int, default=None)
    t = ss.add_parser("pentagons", parents=[common], help="pentagon length multisets passing the smooth tests")
    t.add_argument("--qmax", type=int, default=None)
    t.add_argument("--odd", action="store_true", help="one odd angle")

    p = sub.add_parser("roots", parents=[common], help="real roots on [0, T]")
    p.add_argument("input")
    p.add_argument("--T", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("smoothcheck", parents=[common], help="necessary conditions for matching a smooth domain")
    p.add_argument("polygon")
    p.add_argument("--vs-equilateral", action="store_true")
    p.set_defaults(func=cmd_smoothcheck)
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    updates = {"format": args.format}
    for flag, key in (("qmax", "q_max"), ("indexmax", "index_max")):
        v = getattr(args, flag, None)
        if v is not None:
            updates[key] = v
    return cfg.updated(**updates)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except (SchemaError, UsageError, ResolutionError, HorizonMismatch) as exc:
        _diagnose(type(exc).__name__, str(exc), EXIT_USAGE)
        return EXIT_USAGE
    except (SteklovError, ValueError) as exc:
        # angle sum, degenerate lengths, out-of-range parameters, bad geometry
        _diagnose(type(exc).__name__, str(exc), EXIT_INVARIANT)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
