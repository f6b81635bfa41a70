"""Recover polygons of a known family from their characteristic polynomial.

Every reconstruction answers "within this family, what fits?".  Candidates
are re-verified by recomputing their polynomial, deduplicated up to
congruence and sorted by canonical form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .charpoly import TrigPoly, char_poly, char_poly_regular, poly_equal, term_count
from .errors import (
    AmbiguousError,
    DomainError,
    FamilyError,
    GeometryError,
    NoSolutionError,
    RangeError,
    DegenerateError,
)
from .numerics import ONE, Angle, Scalar, abs_c_inverse, is_exact, snap_odd
from .polygon import (
    PolygonData,
    canonical_key,
    congruent,
    dedupe,
    make_kite,
    make_kite_from_angles,
    make_parallelogram,
    make_rectangle,
    triangle_angle,
    triangle_from_angles,
    triangle_from_lengths,
    triangle_with_angle,
)

SELFCHECK_TOL = 1e-8
FREQ_TOL = 1e-9
SNAP_TOL = 1e-6
PAIR_BOUND = 1000

HALF = Fraction(1, 2)


@dataclass
class ReconstructionResult:
    candidates: list
    classification: str
    notes: list = field(default_factory=list)

    def __len__(self):
        return len(self.candidates)


# ---------------------------------------------------------------------------
# helpers


def _sub(a, b):
    return a - b if is_exact(a) == is_exact(b) else float(a) - float(b)


def _half(x):
    return x / 2


def _feq(a, b, tol: float = FREQ_TOL) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def _split_top(P: TrigPoly) -> list:
    """Terms other than ``cos t``; checks the perimeter-one anchor."""
    if not P.terms:
        raise FamilyError("no cosine terms; not a perimeter-one polygon polynomial")
    f, c = P.terms[-1]
    if not (_feq(f, ONE) and _feq(c, ONE)):
        raise FamilyError("top term is not cos(t) with coefficient 1")
    return list(P.terms[:-1])


def _safe(build: Callable, *args, **kwargs) -> Optional[PolygonData]:
    try:
        return build(*args, **kwargs)
    except (GeometryError, DegenerateError, RangeError, DomainError):
        return None


def _finish(P: TrigPoly, raw: Iterable, classification: str, notes: list, tol: float) -> ReconstructionResult:
    ok = [p for p in raw if p is not None and poly_equal(char_poly(p), P, tol)]
    cands = sorted(dedupe(ok), key=canonical_key)
    return ReconstructionResult(cands, classification, notes)


def _require(res: ReconstructionResult) -> ReconstructionResult:
    if not res.candidates:
        raise NoSolutionError(f"no {res.classification} candidate reproduces the polynomial")
    return res


def _sqrt_clip(x) -> float:
    x = float(x)
    if x < -1e-9 or x > 1 + 1e-9:
        raise NoSolutionError(f"|c|^2 = {x!r} outside [0, 1]")
    return math.sqrt(min(max(x, 0.0), 1.0))


def _abs_c_inv(s: float, m: int) -> Optional[Angle]:
    try:
        return abs_c_inverse(s, m)
    except DomainError:
        return None


# ---------------------------------------------------------------------------
# triangles


def triangle_odd_count(P: TrigPoly) -> int:
    rest = _split_top(P)
    if any(float(f) > 1 for f, _ in rest) or len(rest) > 3:
        raise FamilyError("frequency structure is not that of a triangle")
    if len(rest) >= 2:
        return 0
    if len(rest) == 1:
        return 1
    k = abs(float(P.const))
    if abs(k - 1) <= FREQ_TOL:
        return 3
    if k < 1:
        return 2
    raise FamilyError(f"|constant| = {k} exceeds 1")


def _matches_angle(p: PolygonData, a: Angle, tol: float = 1e-9) -> bool:
    return any(abs(b.radians - a.radians) <= tol for b in p.angles)


def reconstruct_triangle(
    P: TrigPoly,
    known_angle: Optional[Angle] = None,
    pair_bound: int = PAIR_BOUND,
    tol: float = SELFCHECK_TOL,
) -> ReconstructionResult:
    k = triangle_odd_count(P)
    if k == 3:
        res = _finish(P, [triangle_from_angles(*(Angle.exact(1, 3),) * 3)], "Equilateral", ["three-odd"], tol)
    elif k == 0:
        res = _triangle_no_odd(P, tol)
    elif k == 1:
        res = _triangle_one_odd(P, known_angle, tol)
    else:
        res = _triangle_two_odd(P, pair_bound, tol)
    if known_angle is not None:
        known_angle = Angle.of(known_angle)
        res.candidates = [p for p in res.candidates if _matches_angle(p, known_angle)]
        res.notes.append("filtered-by-known-angle")
    return _require(res)


def _triangle_no_odd(P: TrigPoly, tol: float) -> ReconstructionResult:
    rest = _split_top(P)
    xs = [_half(_sub(ONE, f)) for f, _ in rest]
    if len(xs) == 3:
        lengths = xs
        notes = ["no-odd", "scalene"]
    else:
        a, b = xs
        # the doubled length is the one making the perimeter one
        if _feq(2 * a + b, ONE, 1e-9):
            lengths = [a, a, b]
        elif _feq(a + 2 * b, ONE, 1e-9):
            lengths = [a, b, b]
        else:
            raise NoSolutionError("two frequencies but no isosceles triangle of perimeter one")
        notes = ["no-odd", "isosceles"]
    p = _safe(triangle_from_lengths, *lengths)
    return _finish(P, [p], "TriangleNoOdd", notes, tol)


def _one_odd_data(P: TrigPoly):
    (f, A), = _split_top(P)
    l3 = _half(_sub(ONE, f))
    S = _sub(ONE, l3)
    return l3, S, float(A), abs(float(P.const))


def sine_ratio(P: TrigPoly) -> Scalar:
    """``(l1 + l2)/l3`` of a one-odd triangle, read off its only non-top frequency."""
    if triangle_odd_count(P) != 1:
        raise FamilyError("sine ratio needs exactly one odd angle")
    l3, S, _, _ = _one_odd_data(P)
    return S / l3


def _one_odd_from_angle(l3, S, a1: Angle) -> Optional[PolygonData]:
    """Triangle with l1 + l2 = S, side l3 and the odd angle a1 opposite l3."""
    fS, fl3 = float(S), float(l3)
    prod = (fS * fS - fl3 * fl3) / (2 * (1 + math.cos(a1.radians)))
    disc = fS * fS - 4 * prod
    if disc < -1e-10 * fS * fS:
        return None
    if abs(disc) <= 1e-10 * fS * fS:
        l1 = l2 = S / 2
    else:
        r = math.sqrt(disc)
        l1, l2 = (fS + r) / 2, (fS - r) / 2
    if not (l1 > 0 and l2 > 0):
        return None
    return _safe(triangle_with_angle, l1, l2, l3, a1)


def _triangle_one_odd(P: TrigPoly, known: Optional[Angle], tol: float) -> ReconstructionResult:
    l3, S, A, K = _one_odd_data(P)
    notes = ["one-odd"]
    if known is not None and snap_odd(Angle.of(known)) is not None and Angle.of(known).is_exact:
        notes.append("known-odd-angle")
        return _finish(P, [_one_odd_from_angle(l3, S, Angle.of(known))], "TriangleOneOdd", notes, tol)
    # {c(a2)^2, c(a3)^2} solve x^2 - (1 + A^2 - K^2) x + A^2 = 0
    b = 1 + A * A - K * K
    disc = b * b - 4 * A * A
    if disc < -1e-9:
        raise NoSolutionError("no real |c| pair for the non-odd angles")
    r = math.sqrt(max(disc, 0.0))
    us = {_sqrt_clip((b + r) / 2), _sqrt_clip((b - r) / 2)}
    fS, fl3 = float(S), float(l3)
    raw = []
    for u in sorted(us):
        # the larger non-odd angle is at least pi/3, so m = 1 or 2
        for m in (1, 2):
            beta = _abs_c_inv(u, m)
            if beta is None:
                continue
            cb = math.cos(beta.radians)
            den = 2 * (fS - fl3 * cb)
            if den <= 0:
                continue
            l1 = (fS * fS + fl3 * fl3 - 2 * fS * fl3 * cb) / den
            l2 = fS - l1
            if not (l1 > 0 and l2 > 0):
                continue
            try:
                a1 = Angle.approx(triangle_angle(l1, l2, fl3))
            except (DegenerateError, DomainError):
                continue
            a1x = snap_odd(a1, SNAP_TOL)
            if a1x is None:
                continue
            raw.append(_one_odd_from_angle(l3, S, a1x))
    res = _finish(P, raw, "TriangleOneOdd", notes, tol)
    if len(res.candidates) > 4:  # pragma: no cover - bound from the theory
        raise AssertionError("more than four one-odd triangle candidates")
    return res


def sine_key(pi_mult: Fraction, sign: int) -> Fraction:
    """Exact key of ``sign * sin(pi q / (2 p))`` for ``pi_mult = p/q``.

    Two keys agree iff the sine values agree: the value depends on
    ``r = q/(2p)`` modulo 2, a negative sign shifts r by 1, and
    ``sin(pi r) = sin(pi (1 - r))``.
    """
    r = Fraction(pi_mult.denominator, 2 * pi_mult.numerator)
    if sign < 0:
        r += 1
    return min(r % 2, (1 - r) % 2)


def odd_pairs(rest_pi: Fraction, bound: int = PAIR_BOUND) -> list[tuple[int, int]]:
    """Odd ``q1 <= q2 <= bound`` with ``1/q1 + 1/q2 = rest_pi``."""
    out = []
    q1 = 3
    while q1 <= bound and Fraction(2, q1) >= rest_pi:
        left = rest_pi - Fraction(1, q1)
        if left > 0 and left.numerator == 1:
            q2 = left.denominator
            if q2 % 2 and q1 <= q2 <= bound:
                out.append((q1, q2))
        q1 += 2
    return out


def _rational_pi(x: float, max_den: int) -> Optional[Fraction]:
    fr = Fraction(x).limit_denominator(max_den)
    return fr if abs(float(fr) - x) <= 1e-9 else None


def _triangle_two_odd(P: TrigPoly, bound: int, tol: float) -> ReconstructionResult:
    K = abs(float(P.const))
    notes = ["two-odd"]
    raw = []
    for m in (1, 2):
        a3 = _abs_c_inv(math.sqrt(max(0.0, 1 - K * K)), m)
        if a3 is None:
            continue
        a3pi = a3.pi_mult if a3.is_exact else _rational_pi(a3.rad / math.pi, bound * bound)
        if a3pi is None or not Fraction(1, 3) < a3pi < 1:
            continue
        for q1, q2 in odd_pairs(1 - a3pi, bound):
            raw.append(
                _safe(triangle_from_angles, Angle.exact(1, q1), Angle.exact(1, q2), Angle(pi_mult=a3pi))
            )
    notes.append(f"pair-bound={bound}")
    return _finish(P, raw, "TriangleTwoOdd", notes, tol)


# ---------------------------------------------------------------------------
# rectangles and parallelograms


def detect_rectangle(P: TrigPoly, tol: float = SELFCHECK_TOL) -> Optional[tuple]:
    try:
        rest = _split_top(P)
    except FamilyError:
        return None
    if not rest:
        return None
    lp = _half(rest[-1][0])
    l = _sub(HALF, lp)
    if not 0 < float(l) <= 0.25 + 1e-12:
        return None
    if not is_exact(l) and abs(float(l) - 0.25) <= 1e-12:
        l = lp = Fraction(1, 4)
    rect = _safe(make_rectangle, l)
    if rect is None or not poly_equal(char_poly(rect), P, tol):
        return None
    return (l, lp)


def reconstruct_parallelogram(P: TrigPoly, tol: float = SELFCHECK_TOL) -> ReconstructionResult:
    rect = detect_rectangle(P, tol)
    if rect is not None:
        return ReconstructionResult([make_rectangle(rect[0])], "Rectangle", ["rectangle"])
    rest = _split_top(P)
    C = float(P.const)
    if not rest:
        # one angle odd: P = cos t + cos(pi^2/alpha) with alpha obtuse
        if not -1 <= C < 1:
            raise NoSolutionError("constant outside the range of cos(pi^2/alpha)")
        obtuse = math.pi ** 2 / (2 * math.pi - math.acos(C))
        acute = snap_odd(Angle.approx(math.pi - obtuse), SNAP_TOL)
        if acute is None:
            raise NoSolutionError("recovered angle is not supplementary to an odd angle")
        a1 = Angle(pi_mult=1 - acute.pi_mult)
        res = _finish(
            P, [_safe(make_parallelogram, Fraction(1, 8), a1)], "ParallelogramOddPair", ["odd-pair", "lengths=FREE", "l=1/8"], tol
        )
        return _require(res)
    if len(rest) > 3:
        raise FamilyError("too many cosine terms for a parallelogram")
    fm, cm = rest[-1]
    if _feq(fm, HALF):
        l = Fraction(1, 4) if is_exact(fm) else 0.25
        A = float(cm) / 4
        B = (C + 1) / 2
        notes = ["no-odd", "rhombus"]
    else:
        l = _sub(HALF, _half(fm))
        A = float(cm) / 2
        B = (C + A * A + 1) / 2
        notes = ["no-odd"]
    disc = B * B - 4 * A * A
    if disc < -1e-9:
        raise NoSolutionError("hyperbola and circle do not meet")
    r = math.sqrt(max(disc, 0.0))
    raw = []
    for z in {(B + r) / 2, (B - r) / 2}:
        if not -1e-9 <= z <= 1 + 1e-9:
            continue
        a = _abs_c_inv(math.sqrt(min(max(z, 0.0), 1.0)), 1)
        if a is not None and abs(a.radians - math.pi) > 1e-12:
            raw.append(_safe(make_parallelogram, l, a))
    return _require(_finish(P, raw, "ParallelogramNoOdd", notes, tol))


# ---------------------------------------------------------------------------
# kites


def _kite_snap(l, alpha: Angle, which: str) -> Optional[PolygonData]:
    """Kite from ``alpha``, then rebuilt with the ``which`` angle snapped odd."""
    k = _safe(make_kite, l, alpha)
    if k is None:
        return None
    idx = 0 if which == "gamma" else 2
    odd = snap_odd(k.angles[idx], SNAP_TOL)
    if odd is None:
        return None
    return _safe(make_kite, l, **{("gamma" if which == "gamma" else "gamma_prime"): odd})


def _kite_lengths(lp):
    l = _sub(HALF, lp)
    if not 0 < float(l) < 0.25 + 1e-12:
        return None
    return l


def _kite_one_odd(P, rest, tol):
    (fa, _), (fb, _) = rest
    hits: dict = {}
    # odd gamma: frequencies 2l and 2(l'-l) sum to 2l'
    lp = _half(fa + fb)
    l = _kite_lengths(lp)
    if l is not None and float(l) < 0.25 - 1e-12:
        ca2 = P.coef_at(2 * (lp - l))
        if 0 < float(ca2) <= 1 + 1e-9:
            a = _abs_c_inv(_sqrt_clip(ca2), 1)
            if a is not None:
                hits["a"] = _finish(P, [_kite_snap(l, a, "gamma")], "KiteOneOdd", [], tol).candidates
    # odd gamma': frequencies 2l' and 2(l'-l) sum to 6l' - 1
    lp = (fa + fb + 1) / 6
    l = _kite_lengths(lp)
    if l is not None and float(l) < 0.25 - 1e-12:
        ca2 = P.coef_at(2 * (lp - l))
        if 0 < float(ca2) <= 1 + 1e-9:
            raw = []
            for m in (1, 2):
                a = _abs_c_inv(_sqrt_clip(ca2), m)
                if a is not None:
                    raw.append(_kite_snap(l, a, "gamma_prime"))
            hits["b"] = _finish(P, raw, "KiteOneOdd", [], tol).candidates
    hits = {k: v for k, v in hits.items() if v}
    everything = sorted(dedupe([p for v in hits.values() for p in v]), key=canonical_key)
    fs = {float(fa), float(fb)}
    if all(any(abs(x - y) <= FREQ_TOL for y in fs) for x in (0.2, 0.6)) and hits:
        case = "+".join(sorted(hits))
        raise AmbiguousError(
            f"length pairs (1/10, 2/5) and (1/5, 3/10) share frequencies; branch {case}",
            case,
            everything,
        )
    notes = ["one-odd"] + [f"odd-{'gamma' if k == 'a' else 'gamma-prime'}" for k in sorted(hits)]
    return _require(ReconstructionResult(everything, "KiteOneOdd", notes))


def _kite_two_unequal_odd(P, rest, tol):
    (f, coef), = rest
    ff = float(f)
    if abs(ff - 1 / 3) <= FREQ_TOL:
        raise AmbiguousError("(l, l') = (1/6, 1/3) matches a one-odd kite", "coincidence-a")
    if abs(ff - 2 / 3) <= FREQ_TOL:
        raise AmbiguousError("(l, l') = (1/12, 5/12) matches a no-odd kite", "coincidence-b")
    if abs(ff - 0.5) <= FREQ_TOL:
        return _rhombus_or_kite(P, tol)
    l = (1 - f) / 4
    ca = _sqrt_clip(coef)
    a = _abs_c_inv(ca, 1)
    raw = []
    k = _safe(make_kite, l, a) if a is not None else None
    if k is not None:
        g, gp = snap_odd(k.angles[0], SNAP_TOL), snap_odd(k.angles[2], SNAP_TOL)
        if g is not None and gp is not None and g != gp:
            raw.append(_safe(make_kite_from_angles, g, gp))
    return _require(_finish(P, raw, "KiteTwoUnequalOdd", ["two-unequal-odd"], tol))


def _rhombus_or_kite(P, tol):
    """Single term at 1/2: rhombi without odd angles, or the (1/8, 3/8) kite."""
    raw = []
    notes = ["coincidence-c"]
    try:
        raw += reconstruct_parallelogram(P, tol).candidates
    except (NoSolutionError, FamilyError):
        pass
    coef, const = float(P.terms[0][1]), float(P.const)
    # c(alpha)^2 +/- s(alpha)^2 is 1 for one sign and cos(pi^2/alpha) for the other
    for v in (coef + const, coef - const):
        if abs(v - 1) <= 1e-9 or not -1 <= v < 1:
            continue
        alpha = Angle.approx(math.pi ** 2 / (2 * math.pi - math.acos(v)))
        k = _safe(make_kite, Fraction(1, 8), alpha)
        if k is None:
            continue
        g, gp = snap_odd(k.angles[0], SNAP_TOL), snap_odd(k.angles[2], SNAP_TOL)
        if g is not None and gp is not None and g != gp:
            raw.append(_safe(make_kite_from_angles, g, gp))
    return _require(_finish(P, raw, "KiteRhombusCoincidence", notes, tol))


def reconstruct_kite(P: TrigPoly, tol: float = SELFCHECK_TOL) -> ReconstructionResult:
    rest = _split_top(P)
    if len(rest) > 3:
        raise FamilyError("too many cosine terms for a kite")
    if not rest:
        raise AmbiguousError("only cos(t) survives: two equal odd angles, lengths undetermined", "equal-odd-pair")
    rect = detect_rectangle(P, tol)
    if rect is not None and rect[0] == rect[1]:
        return ReconstructionResult([make_rectangle(rect[0])], "Square", ["square"])
    if len(rest) == 1:
        return _kite_two_unequal_odd(P, rest, tol)
    if len(rest) == 2:
        fs = sorted(float(f) for f, _ in rest)
        if abs(fs[0] - 1 / 3) <= FREQ_TOL and abs(fs[1] - 2 / 3) <= FREQ_TOL:
            raise AmbiguousError("(l, l') = (1/6, 1/3): frequencies of 2l and 2(l'-l) merge", "coincidence-a")
        return _kite_one_odd(P, rest, tol)
    # no odd angles
    lp = _half(rest[-1][0])
    l = _kite_lengths(lp)
    if l is None:
        raise NoSolutionError("largest sub-perimeter frequency gives no kite")
    ca = _sqrt_clip(P.coef_at(2 * (lp - l)))
    raw = []
    a = _abs_c_inv(ca, 1)
    if a is not None:
        raw.append(_safe(make_kite, l, a))
    if ca > 0:
        cg = abs(float(P.coef_at(2 * lp))) / (2 * ca)
        if cg <= 1 + 1e-9:
            g = _abs_c_inv(min(cg, 1.0), 1)
            if g is not None:
                raw.append(_safe(make_kite, l, gamma=g))
    return _require(_finish(P, raw, "KiteNoOdd", ["no-odd"], tol))


# ---------------------------------------------------------------------------
# regular polygons


def detect_regular(P: TrigPoly, tol: float = SELFCHECK_TOL) -> Optional[int]:
    try:
        rest = _split_top(P)
    except FamilyError:
        return None
    if not rest:
        return 3 if poly_equal(P, char_poly_regular(3), tol) else None
    l_min = (1 - float(rest[-1][0])) / 2
    top = int(math.floor(1 / l_min)) + 1 if l_min > 0 else 3
    for n in range(4, max(top, 4) + 1):
        if poly_equal(P, char_poly_regular(n), tol):
            return n
    return None


def reconstruct_regular(P: TrigPoly, tol: float = SELFCHECK_TOL) -> ReconstructionResult:
    from .polygon import make_regular

    n = detect_regular(P, tol)
    if n is None:
        return ReconstructionResult([], "NotInFamily", ["regular"])
    return ReconstructionResult([make_regular(n)], "RegularNGon", [f"n={n}"])


FAMILIES = {
    "triangle": reconstruct_triangle,
    "rectangle": None,
    "parallelogram": reconstruct_parallelogram,
    "kite": reconstruct_kite,
    "regular": reconstruct_regular,
}


def reconstruct(P: TrigPoly, family: str, **kwargs) -> ReconstructionResult:
    if family == "rectangle":
        r = detect_rectangle(P, kwargs.get("tol", SELFCHECK_TOL))
        if r is None:
            return ReconstructionResult([], "NotInFamily", ["rectangle"])
        return ReconstructionResult([make_rectangle(r[0])], "Rectangle", ["rectangle"])
    try:
        fn = FAMILIES[family]
    except KeyError:
        raise FamilyError(f"unknown family {family!r}") from None
    return fn(P, **kwargs)


__all__ = [
    "FAMILIES",
    "ReconstructionResult",
    "detect_rectangle",
    "detect_regular",
    "odd_pairs",
    "reconstruct",
    "reconstruct_kite",
    "reconstruct_parallelogram",
    "reconstruct_regular",
    "reconstruct_triangle",
    "sine_key",
    "sine_ratio",
    "triangle_odd_count",
]
