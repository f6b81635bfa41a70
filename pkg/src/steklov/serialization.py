"""JSON and CSV forms of polygons, polynomials and results.

Exact values travel as ``"p/q"`` strings so they survive a round trip;
floats are written with 17 significant digits.  The writer is deterministic:
same data, same bytes.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any

from .charpoly import TrigPoly
from .errors import DomainError, SchemaError
from .inverse import ReconstructionResult
from .numerics import Angle, format_scalar, is_exact, parse_scalar
from .polygon import CURVED, STRAIGHT, PolygonData
from .quasieig import QuasiSpectrum
from .search import Hit, SearchReport


class Raw(str):
    """Pre-rendered JSON token (used for floats)."""


def scalar(x) -> Any:
    if is_exact(x):
        return format_scalar(x)
    x = float(x)
    if not math.isfinite(x):
        return None
    return Raw(format(x, ".17g"))


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with floats at 17 significant digits and exact values as strings."""
    return _write(_jsonable(obj), 0, indent) + "\n"


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, Raw) or obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return Raw(str(obj))
    if isinstance(obj, (Fraction, float)):
        return scalar(obj)
    if isinstance(obj, Angle):
        return angle_to_dict(obj)
    if isinstance(obj, PolygonData):
        return polygon_to_dict(obj)
    if isinstance(obj, TrigPoly):
        return poly_to_dict(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return _jsonable(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _write(v: Any, level: int, indent: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(v, Raw):
        return str(v)
    if isinstance(v, (str, bool)) or v is None:
        return json.dumps(v)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_write(x, level + 1, indent)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if not v:
        return "[]"
    items = [pad + _write(x, level + 1, indent) for x in v]
    return "[\n" + ",\n".join(items) + "\n" + end + "]"


# ---------------------------------------------------------------------------
# scalars and angles


def _read_scalar(v, what: str):
    if isinstance(v, bool) or v is None:
        raise SchemaError(f"{what}: expected a number or 'p/q' string, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        try:
            return parse_scalar(v)
        except DomainError as exc:
            raise SchemaError(f"{what}: {exc}") from exc
    raise SchemaError(f"{what}: expected a number or 'p/q' string, got {type(v).__name__}")


def angle_to_dict(a: Angle) -> dict:
    return {"pi_mult": format_scalar(a.pi_mult)} if a.is_exact else {"rad": scalar(a.rad)}


def angle_from_dict(d, what: str = "angle") -> Angle:
    if not isinstance(d, dict) or len(d) != 1 or not ({"pi_mult", "rad"} & set(d)):
        raise SchemaError(f"{what}: expected {{'pi_mult': ...}} or {{'rad': ...}}")
    # out-of-range values are invariant violations (DomainError), not schema errors
    if "pi_mult" in d:
        v = _read_scalar(d["pi_mult"], what)
        return Angle(pi_mult=Fraction(v)) if is_exact(v) else Angle.approx(math.pi * v)
    return Angle.approx(float(_read_scalar(d["rad"], what)))


# ---------------------------------------------------------------------------
# polygons


def polygon_to_dict(p: PolygonData) -> dict:
    return {
        "n": p.n,
        "edges": [{"len": scalar(l), "kind": k} for l, k in zip(p.lengths, p.kinds)],
        "angles": [angle_to_dict(a) for a in p.angles],
        "perimeter": scalar(p.perimeter),
    }


def polygon_from_dict(d) -> PolygonData:
    """Parse the polygon schema; geometric invariants are checked by the constructor."""
    if not isinstance(d, dict):
        raise SchemaError("polygon must be a JSON object")
    for key in ("n", "edges", "angles"):
        if key not in d:
            raise SchemaError(f"polygon is missing {key!r}")
    n = d["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise SchemaError(f"n must be a non-negative integer, got {n!r}")
    edges, angles = d["edges"], d["angles"]
    if not isinstance(edges, list) or not isinstance(angles, list):
        raise SchemaError("edges and angles must be lists")
    if len(edges) != n or len(angles) != n:
        raise SchemaError(f"n = {n} but got {len(edges)} edges and {len(angles)} angles")
    lengths, kinds = [], []
    for i, e in enumerate(edges):
        if not isinstance(e, dict) or "len" not in e:
            raise SchemaError(f"edge {i}: expected {{'len': ..., 'kind': ...}}")
        lengths.append(_read_scalar(e["len"], f"edge {i}"))
        kind = e.get("kind", STRAIGHT)
        if kind not in (STRAIGHT, CURVED):
            raise SchemaError(f"edge {i}: kind must be 'straight' or 'curved'")
        kinds.append(kind)
    angs = [angle_from_dict(a, f"angle {i}") for i, a in enumerate(angles)]
    perimeter = _read_scalar(d["perimeter"], "perimeter") if d.get("perimeter") is not None else None
    p = PolygonData.make(lengths, angs, kinds, perimeter)
    if n > 0 and perimeter is not None and abs(float(perimeter) - float(p.perimeter)) > 1e-12:
        raise DomainError(f"perimeter {perimeter} does not match the edge sum {p.perimeter}")
    return p


# ---------------------------------------------------------------------------
# polynomials


def poly_to_dict(P: TrigPoly) -> dict:
    return {"terms": [{"freq": scalar(f), "coef": scalar(c)} for f, c in P.terms], "const": scalar(P.const)}


def poly_from_dict(d) -> TrigPoly:
    if not isinstance(d, dict) or "terms" not in d or "const" not in d:
        raise SchemaError("polynomial needs 'terms' and 'const'")
    if not isinstance(d["terms"], list):
        raise SchemaError("terms must be a list")
    pairs = []
    for i, t in enumerate(d["terms"]):
        if not isinstance(t, dict) or "freq" not in t or "coef" not in t:
            raise SchemaError(f"term {i}: expected {{'freq': ..., 'coef': ...}}")
        f = _read_scalar(t["freq"], f"term {i} freq")
        if f < 0:
            raise SchemaError(f"term {i}: negative frequency")
        pairs.append((f, _read_scalar(t["coef"], f"term {i} coef")))
    return TrigPoly.build(pairs, _read_scalar(d["const"], "const"))


def poly_to_csv(P: TrigPoly) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["freq", "coef"])
    w.writerow(["0", _cell(P.const)])
    for f, c in P.terms:
        w.writerow([_cell(f), _cell(c)])
    return buf.getvalue()


def poly_from_csv(text: str) -> TrigPoly:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != ["freq", "coef"]:
        raise SchemaError("CSV polynomial needs a 'freq,coef' header")
    const, pairs = Fraction(0), []
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise SchemaError(f"line {i}: expected two columns")
        f = _read_scalar(row[0], f"line {i}")
        c = _read_scalar(row[1], f"line {i}")
        if f == 0:
            const = const + c
        else:
            pairs.append((f, c))
    return TrigPoly.build(pairs, const)


def _cell(x) -> str:
    return format_scalar(x)


# ---------------------------------------------------------------------------
# results


def result_to_dict(r: ReconstructionResult) -> dict:
    return {
        "classification": r.classification,
        "notes": list(r.notes),
        "candidates": [polygon_to_dict(p) for p in r.candidates],
    }


def hit_to_dict(h: Hit) -> dict:
    out: dict[str, Any] = {"items": [_jsonable(x) for x in h.items]}
    if h.poly is not None:
        out["poly"] = poly_to_dict(h.poly)
    if h.info:
        out["info"] = _jsonable(h.info)
    return out


def report_to_dict(r: SearchReport) -> dict:
    return {
        "query": _jsonable(r.query),
        "hits": [hit_to_dict(h) for h in r.hits],
        "conditions": _jsonable(r.conditions),
        "bounds": _jsonable(r.bounds),
    }


def spectrum_to_dict(q: QuasiSpectrum) -> dict:
    return {
        "T": scalar(q.T),
        "step": scalar(q.step),
        "tol": scalar(q.tol),
        "roots": [{"t": scalar(r), "tangential": t} for r, t in zip(q.roots, q.tangential)],
    }


def spectrum_to_csv(q: QuasiSpectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "root", "tangential"])
    for i, (r, t) in enumerate(zip(q.roots, q.tangential)):
        w.writerow([i, format(r, ".17g"), int(t)])
    return buf.getvalue()


def rows_to_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_scalar(x) if isinstance(x, (Fraction, float)) else x for x in row])
    return buf.getvalue()


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
