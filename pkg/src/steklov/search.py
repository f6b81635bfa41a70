"""Enumeration experiments: polynomial collisions, quadrilaterals against the
equilateral triangle, and necessary conditions for matching a smooth domain.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .charpoly import (
    TrigPoly,
    _exact_terms,
    a_coefficient,
    char_poly,
    class_frequency,
    cos_poly,
    enumerate_sign_classes,
    poly_equal,
)
from .inverse import sine_key
from .numerics import ONE, Angle, angle_class, c_of, is_exact, product, s_of
from .polygon import (
    PolygonData,
    canonical_form,
    canonical_key,
    dedupe,
    edge_directions,
    l_star_of,
    reduce,
    triangle_from_angles,
)

HALF = Fraction(1, 2)


@dataclass
class Hit:
    items: tuple  # polygons, multisets or length patterns
    poly: Optional[TrigPoly] = None
    info: dict = field(default_factory=dict)


@dataclass
class SearchReport:
    query: dict
    hits: list = field(default_factory=list)
    conditions: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """All recorded conditions hold (used by smooth_check)."""
        return all(self.conditions.values())


# ---------------------------------------------------------------------------
# triangle collisions


def _rationals(q_max: int) -> list[Fraction]:
    return sorted({Fraction(p, q) for q in range(2, q_max + 1) for p in range(1, q)})


def rational_triangles(q_max: int):
    """Angle multisets (a1 <= a2 <= a3, multiples of pi) with denominators <= q_max."""
    vals = _rationals(q_max)
    allowed = set(vals)
    for i, a in enumerate(vals):
        if 3 * a > 1:
            break
        for b in vals[i:]:
            c = 1 - a - b
            if c < b:
                break
            if c in allowed:
                yield (a, b, c)


def _group_key(T: PolygonData, P: TrigPoly):
    odd = [angle_class(a) for a in T.angles if angle_class(a).kind == "odd"]
    if len(odd) == 2 and not P.terms[:-1]:
        # constant -p1 p2 s(a3): key on the exact sine value
        a3 = next(a for a in T.angles if angle_class(a).kind != "odd")
        return ("sine", sine_key(a3.pi_mult, odd[0].parity * odd[1].parity))
    rnd = lambda x: round(float(x), 10) + 0.0
    return ("poly", tuple((rnd(f), rnd(c)) for f, c in P.terms), rnd(P.const))


def find_charpoly_collisions_triangles(q_max: int, tol: float = 1e-12) -> SearchReport:
    if q_max < 3:
        raise ValueError("q_max must be >= 3")
    groups: dict = defaultdict(list)
    count = 0
    for a in rational_triangles(q_max):
        T = triangle_from_angles(*(Angle(pi_mult=x) for x in a))
        P = char_poly(T)
        groups[_group_key(T, P)].append((T, P))
        count += 1
    hits = []
    for members in groups.values():
        if len(members) < 2:
            continue
        P0 = members[0][1]
        ok = [T for T, P in members if poly_equal(P, P0, tol)]
        uniq = sorted(dedupe(ok), key=canonical_key)
        if len(uniq) >= 2:
            hits.append(Hit(tuple(canonical_form(T) for T in uniq), P0, {"size": len(uniq)}))
    hits.sort(key=lambda h: canonical_key(h.items[0]))
    return SearchReport({"op": "triangles", "q_max": q_max}, hits, {}, {"q_max": q_max, "triangles": count})


# ---------------------------------------------------------------------------
# quadrilaterals against the equilateral triangle


def _quad_angles(k: int, j: int):
    a1, a3 = Fraction(1, 2 * k + 1), Fraction(1, 2 * j + 1)
    a2 = (2 - a1 - a3) / 2
    return tuple(Angle(pi_mult=x) for x in (a1, a2, a3, a2))


def quad_conditions(k: int, j: int) -> dict:
    """Angle/parity conditions and the formal polynomial test for one (k, j)."""
    angles = _quad_angles(k, j)
    cls = [angle_class(a) for a in angles]
    non_adjacent = cls[0].kind == "odd" and cls[2].kind == "odd" and cls[1].kind != "odd" and cls[3].kind != "odd"
    opposite = (k % 2) != (j % 2)
    th2, th4 = angles[1].theta(), angles[3].theta()
    cos_gap = math.cos(th2 - th4)
    P = _formal_poly(angles)
    return {
        "odd_non_adjacent": non_adjacent,
        "opposite_parity": opposite,
        "cos_theta_gap_is_one": abs(cos_gap - 1) <= 1e-12,
        "formal_poly_is_cos_t_plus_1": poly_equal(P, cos_poly(ONE, ONE), 1e-12),
    }


def _formal_poly(angles) -> TrigPoly:
    """Polynomial of the angle data with formal lengths l1 + l2 = l3 + l4 = 1/2.

    A polygon object would demand closure, so the sum is built directly.
    """
    pairs = _exact_terms([Fraction(1, 4)] * 4, [c_of(a) for a in angles])
    return TrigPoly.build(pairs, -product(s_of(a) for a in angles))


def _closure_min(angles, grid: int = 100, starts: int = 5):
    dirs = np.array(edge_directions(angles), dtype=np.float64)
    h = 0.5 / grid
    g = (np.arange(grid) + 0.5) * h
    L1, L3 = np.meshgrid(g, g, indexing="ij")
    res = _kernels.closure_grid(L1.ravel(), L3.ravel(), dirs, 0.5)
    best = float(res.min())
    order = np.argsort(res)[:starts]

    def f(x):
        return float(_kernels.closure_grid(np.array([x[0]]), np.array([x[1]]), dirs, 0.5)[0])

    eps = 1e-12
    for idx in order:
        x0 = (L1.ravel()[idx], L3.ravel()[idx])
        r = minimize(f, x0, method="L-BFGS-B", bounds=[(eps, 0.5 - eps)] * 2)
        best = min(best, float(r.fun))
    # the residual is affine in (l1, l3); its least-squares minimum over the
    # whole plane bounds the residual from below everywhere
    A = np.column_stack([dirs[0] - dirs[1], dirs[2] - dirs[3]])
    b = -0.5 * (dirs[1] + dirs[3])
    x, _, rank, _ = np.linalg.lstsq(A, b, rcond=1e-12)
    lower = float(np.linalg.norm(A @ x - b))
    return {"min_residual": best, "lower_bound": lower, "linear_rank": int(rank)}


def quad_vs_equilateral(index_max: int, grid: int = 100, feasible_tol: float = 1e-6) -> SearchReport:
    if index_max < 1:
        raise ValueError("index_max must be >= 1")
    hits, conds = [], {}
    for k in range(1, index_max + 1):
        for j in range(k, index_max + 1):
            c = quad_conditions(k, j)
            key = f"k={k},j={j}"
            conds[key] = c
            info: dict[str, Any] = {"k": k, "j": j, "angles": _quad_angles(k, j), **c}
            if c["opposite_parity"] and c["odd_non_adjacent"]:
                m = _closure_min(_quad_angles(k, j), grid)
                info.update(m, feasible=m["min_residual"] <= feasible_tol)
            else:
                info.update(min_residual=None, lower_bound=None, linear_rank=None, feasible=False, rejected="same-parity")
            hits.append(Hit((k, j), None, info))
    return SearchReport(
        {"op": "quadvseq", "index_max": index_max},
        hits,
        {},
        {"index_max": index_max, "grid": grid, "feasible_tol": feasible_tol},
    )


# ---------------------------------------------------------------------------
# smooth-domain necessary conditions


def _in_a_plus(a: Angle) -> bool:
    return float(c_of(a)) > 0


def _subset_sum_ints(values, target: int) -> bool:
    """Some non-empty sub-multiset of the integers sums to target."""
    reach = 1  # bit s set: s is a sum of a sub-multiset (possibly empty)
    for v in values:
        reach |= reach << v
    return target > 0 and bool((reach >> target) & 1)


def _scaled(lengths, tol: float):
    """Common integer scale for exact data, or None for floats."""
    if all(is_exact(x) for x in lengths):
        den = math.lcm(*(Fraction(x).denominator for x in lengths))
        return [int(Fraction(x) * den) for x in lengths], den
    return None


def _sum_to(values, target, tol: float) -> bool:
    sc = _scaled(list(values) + [target], tol)
    if sc is not None:
        ints, den = sc
        return _subset_sum_ints(ints[:-1], ints[-1])
    vals = [float(v) for v in values]
    sums = {0.0}
    for v in vals:
        sums |= {s + v for s in sums}
    return any(abs(s - float(target)) <= tol for s in sums if s > 0)


def _mult(lengths, x, tol):
    return sum(1 for y in lengths if (y == x if is_exact(x) and is_exact(y) else abs(float(y) - float(x)) <= tol))


def prop_b_holds(lengths, tol: float = 1e-10) -> bool:
    """For each l in L*: m(l) = n, or k l (2 <= k <= m) is a sum of entries != l."""
    n = len(lengths)
    for l in l_star_of(lengths, tol):
        m = _mult(lengths, l, tol)
        if m == n:
            continue
        others = [y for y in lengths if _mult([y], l, tol) == 0]
        if not any(_sum_to(others, k * l, tol) for k in range(2, m + 1)):
            return False
    return True


def lstar_bound(n: int, odd_count: int) -> int:
    if odd_count == 0 and n in (5, 6):
        return 2
    if odd_count == 0 and n in (7, 8):
        return 3
    if odd_count == 1 and n == 5:
        return 3
    return 4


def _zero_classes(p: PolygonData, tol: float):
    out = []
    for s in enumerate_sign_classes(p.n):
        f = class_frequency(p, s)
        if (f == 0) if is_exact(f) else abs(float(f)) <= tol:
            out.append((s, a_coefficient(p, s)))
    return out


def _split_by_even_pair(p: PolygonData, same_parity: bool, tol: float) -> bool:
    n = p.n
    for i, j in itertools.combinations(range(n), 2):
        ci, cj = angle_class(p.angles[i]), angle_class(p.angles[j])
        if ci.kind != "even" or cj.kind != "even":
            continue
        if (ci.parity == cj.parity) != same_parity:
            continue
        # vertex i joins edges i and i+1, so edges i+1..j form one arc
        arc = sum((p.lengths[e] for e in range(i + 1, j + 1)), Fraction(0))
        if (arc == HALF) if is_exact(arc) else abs(float(arc) - 0.5) <= tol:
            return True
    return False


def smooth_check(p: PolygonData, vs_equilateral: bool = False, tol: float = 1e-10) -> SearchReport:
    """Necessary conditions for ``P`` to equal ``cos t - 1`` (or ``cos t + 1``)."""
    target = cos_poly(ONE, ONE if vs_equilateral else -ONE)
    odd = p.odd_indices()
    n = p.n
    conds: dict[str, bool] = {}
    conds["direct_poly_test"] = poly_equal(char_poly(p), target, tol)
    conds["n_at_least_5"] = n >= 5
    conds["angle_in_A_plus"] = any(_in_a_plus(a) for a in p.angles)
    conds["at_most_one_odd"] = len(odd) <= 1
    red = reduce(p) if len(odd) == 1 else p
    L = list(red.lengths)
    lstar_red = l_star_of(L, tol)
    conds["lstar_multiplicity"] = all(_mult(L, l, tol) >= 2 for l in lstar_red)
    conds["lstar_endpoint_split"] = all(_endpoint_split(red, l, tol) for l in lstar_red)
    conds["prop_b"] = prop_b_holds(L, tol)
    l0 = min(L, key=float)
    m0 = _mult(L, l0, tol)
    has_double = _mult(L, 2 * l0, tol) > 0
    conds["shortest_multiplicity"] = m0 >= 2 and (m0 >= 3 or has_double or m0 == len(L))
    conds["lstar_size_bound"] = len(l_star_of(list(p.lengths), tol)) <= lstar_bound(n, len(odd))
    zero = _zero_classes(p, tol)
    sign = 1 if vs_equilateral else -1
    split_i = _split_by_even_pair(p, vs_equilateral, tol)
    split_ii = sum(1 for _, a in zero if float(a) * sign > 0) >= 2
    conds["boundary_split"] = split_i or split_ii
    conds["halves_partition"] = _sum_to(list(p.lengths), HALF if all(is_exact(x) for x in p.lengths) else 0.5, tol)
    if len(odd) == 1:
        j = odd[0]
        s = p.lengths[j] + p.lengths[(j + 1) % n]
        conds["odd_edges_below_half"] = float(s) < 0.5 - tol
    return SearchReport(
        {"op": "smoothcheck", "vs_equilateral": vs_equilateral, "polygon": p},
        [],
        conds,
        {"tol": tol, "odd_count": len(odd), "split_i": split_i, "split_ii": split_ii},
    )


def _endpoint_split(p: PolygonData, l, tol: float) -> bool:
    """Edges of length l: one with exactly one endpoint in A+, one with both or neither."""
    n = p.n
    one = both_or_neither = False
    for e in range(n):
        if _mult([p.lengths[e]], l, tol) == 0:
            continue
        # edge e runs between the vertices carrying angles e-1 and e
        hits = _in_a_plus(p.angles[e - 1]) + _in_a_plus(p.angles[e])
        if hits == 1:
            one = True
        else:
            both_or_neither = True
    return one and both_or_neither


# ---------------------------------------------------------------------------
# pentagon candidates


def _length_values(q_max: int, den: int) -> list[int]:
    """Numerators over ``den`` of the rationals in (0, 1/2) with denominator <= q_max."""
    return sorted({den * p // q for q in range(2, q_max + 1) for p in range(1, q) if 2 * p < q})


def _lstar_ints(ms: list[int]) -> list[int]:
    out = []
    for x in sorted(set(ms)):
        smaller = [v for v in ms if v < x]
        if not _sum_at_least_two(smaller, x):
            out.append(x)
    return out


def _sum_at_least_two(vals: list[int], x: int) -> bool:
    for r in range(2, len(vals) + 1):
        for c in itertools.combinations(vals, r):
            if sum(c) == x:
                return True
    return False


def _prop_b_ints(ms: list[int], lstar: list[int]) -> bool:
    n = len(ms)
    for l in lstar:
        m = ms.count(l)
        if m < 2:
            return False
        if m == n:
            continue
        others = [v for v in ms if v != l]
        if not any(_subset_sum_ints(others, k * l) for k in range(2, m + 1)):
            return False
    return True


def _multiset_candidates(size: int, q_max: int, lstar_max: int, lstar_exact: Optional[int] = None):
    den = math.lcm(*range(2, q_max + 1))
    half = den // 2
    vals = _length_values(q_max, den)
    out = []
    for c in itertools.combinations_with_replacement(vals, size - 1):
        last = den - sum(c)
        if last < c[-1] or last >= half:
            continue
        ms = list(c) + [last]
        ls = _lstar_ints(ms)
        if len(ls) > lstar_max or (lstar_exact is not None and len(ls) != lstar_exact):
            continue
        if not _prop_b_ints(ms, ls):
            continue
        if not _subset_sum_ints(ms, half):
            continue
        out.append((tuple(Fraction(v, den) for v in ms), len(ls)))
    return out


def smooth_candidate_pentagons(q_max: int = 14, odd_angle: bool = False) -> SearchReport:
    if not odd_angle:
        found = _multiset_candidates(5, q_max, lstar_bound(5, 0))
        hits = [Hit(ms, None, {"lstar_size": k}) for ms, k in found]
        return SearchReport({"op": "pentagons", "odd": False, "q_max": q_max}, hits, {}, {"q_max": q_max})
    # reduced 4-gon: one curved edge m = l1 + l2 < 1/2 and straight l3, l4, l5
    found = _multiset_candidates(4, q_max, 1, 1)
    hits = []
    seen = set()
    for ms, _ in found:
        for m in sorted(set(ms)):
            rest = list(ms)
            rest.remove(m)
            for l3, l4, l5 in set(itertools.permutations(rest)):
                if not _alternating((m, l3, l4, l5)):
                    continue
                pat = (l3, l4, l5, m)
                if pat not in seen:
                    seen.add(pat)
                    hits.append(Hit(pat, None, {"reduced": ms, "l1+l2": m}))
    hits.sort(key=lambda h: tuple(h.items))
    return SearchReport({"op": "pentagons", "odd": True, "q_max": q_max}, hits, {}, {"q_max": q_max})


def _alternating(cyc: tuple) -> bool:
    """Two distinct values must alternate around the reduced 4-gon."""
    vals = set(cyc)
    if len(vals) == 1:
        return True
    if len(vals) == 2 and all(cyc.count(v) == 2 for v in vals):
        return cyc[0] == cyc[2] and cyc[1] == cyc[3]
    return True


__all__ = [
    "Hit",
    "SearchReport",
    "find_charpoly_collisions_triangles",
    "lstar_bound",
    "prop_b_holds",
    "quad_conditions",
    "quad_vs_equilateral",
    "rational_triangles",
    "smooth_candidate_pentagons",
    "smooth_check",
]
