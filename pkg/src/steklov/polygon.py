"""Convex (curvilinear) polygons: data model, constructors and combinatorics.

Edges and angles are stored cyclically; ``angles[j]`` sits at the vertex
shared by ``lengths[j]`` and ``lengths[(j + 1) % n]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    AngleSumError,
    CurvedEdgeError,
    DegenerateError,
    DomainError,
    GeometryError,
    RangeError,
)
from .numerics import (
    ONE,
    Angle,
    Scalar,
    angle_class,
    as_scalar,
    is_exact,
)

STRAIGHT = "straight"
CURVED = "curved"

ANGLE_SUM_TOL = 1e-12
CLOSURE_TOL = 1e-10
CONGRUENCE_TOL = 1e-9
MULTISET_TOL = 1e-10


def _sum(values) -> Scalar:
    values = list(values)
    if all(is_exact(v) for v in values):
        return sum(values, Fraction(0))
    return math.fsum(float(v) for v in values)


@dataclass(frozen=True)
class PolygonData:
    """Cyclic edge lengths, edge kinds and interior angles.

    A smooth domain is the 0-gon: no edges, no angles, only a perimeter.
    """

    lengths: tuple
    angles: tuple
    kinds: tuple
    perimeter: Scalar

    @classmethod
    def make(
        cls,
        lengths: Sequence,
        angles: Sequence,
        kinds: Sequence[str] | None = None,
        perimeter=None,
    ) -> "PolygonData":
        lengths = tuple(as_scalar(x) for x in lengths)
        try:
            angles = tuple(Angle.of(a) for a in angles)
        except DomainError as exc:
            raise DegenerateError(str(exc)) from exc
        n = len(lengths)
        if kinds is None:
            kinds = (STRAIGHT,) * n
        kinds = tuple(kinds)
        if len(angles) != n or len(kinds) != n:
            raise DomainError("lengths, angles and kinds must have equal length")
        for k in kinds:
            if k not in (STRAIGHT, CURVED):
                raise DomainError(f"unknown edge kind {k!r}")
        for x in lengths:
            if not x > 0:
                raise DegenerateError(f"edge length {x!r} is not positive")
        if n == 0:
            if perimeter is None:
                raise DomainError("a 0-gon needs an explicit perimeter")
            perimeter = as_scalar(perimeter)
            if not perimeter > 0:
                raise DegenerateError("perimeter must be positive")
        else:
            perimeter = _sum(lengths)
        p = cls(lengths, angles, kinds, perimeter)
        if n >= 3 and all(k == STRAIGHT for k in kinds):
            _check_angle_sum(angles)
        return p

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def is_exact(self) -> bool:
        return all(is_exact(x) for x in self.lengths) and all(a.is_exact for a in self.angles)

    @property
    def all_straight(self) -> bool:
        return all(k == STRAIGHT for k in self.kinds)

    def odd_indices(self) -> list[int]:
        return [j for j, a in enumerate(self.angles) if angle_class(a).kind == "odd"]

    def __repr__(self):
        from .numerics import format_scalar

        if self.n == 0:
            return f"PolygonData(0-gon, perimeter={format_scalar(self.perimeter)})"
        ls = ", ".join(format_scalar(x) if is_exact(x) else f"{x:.6g}" for x in self.lengths)
        angs = ", ".join(
            f"{format_scalar(a.pi_mult)}pi" if a.is_exact else f"{a.rad:.6g}" for a in self.angles
        )
        return f"PolygonData(lengths=({ls}), angles=({angs}))"


def _check_angle_sum(angles) -> None:
    n = len(angles)
    if all(a.is_exact for a in angles):
        total = sum((a.pi_mult for a in angles), Fraction(0))
        if total != n - 2:
            raise AngleSumError(f"angles sum to {total}*pi, expected {n - 2}*pi")
        return
    total = math.fsum(a.radians for a in angles)
    if abs(total - (n - 2) * math.pi) > ANGLE_SUM_TOL * max(1, n):
        raise AngleSumError(f"angles sum to {total!r}, expected {(n - 2) * math.pi!r}")


def smooth_domain(perimeter=ONE) -> PolygonData:
    return PolygonData.make((), (), perimeter=perimeter)


def normalize_perimeter(p: PolygonData) -> PolygonData:
    """Rescale so the perimeter is one.  Idempotent."""
    if p.perimeter == 1:
        return p
    if p.n == 0:
        return smooth_domain()
    P = p.perimeter
    lengths = [x / P for x in p.lengths]
    return PolygonData.make(lengths, p.angles, p.kinds)


# ---------------------------------------------------------------------------
# relabeling and congruence


def relabel(p: PolygonData, shift: int = 0, reverse: bool = False) -> PolygonData:
    """Apply one of the 2n dihedral relabelings."""
    n = p.n
    if n == 0:
        return p
    e, a, k = p.lengths, p.angles, p.kinds
    if reverse:
        e = tuple(e[n - 1 - i] for i in range(n))
        k = tuple(k[n - 1 - i] for i in range(n))
        a = tuple(a[(n - 2 - i) % n] for i in range(n))
    s = shift % n
    e = e[s:] + e[:s]
    a = a[s:] + a[:s]
    k = k[s:] + k[:s]
    return PolygonData(e, a, k, p.perimeter)


def relabelings(p: PolygonData) -> Iterator[PolygonData]:
    if p.n == 0:
        yield p
        return
    for rev in (False, True):
        for s in range(p.n):
            yield relabel(p, s, rev)


def _angle_key(a: Angle):
    return a.pi_mult if a.is_exact else a.rad / math.pi


def _sort_key(p: PolygonData):
    return (tuple(p.lengths), tuple(_angle_key(a) for a in p.angles), p.kinds)


def canonical_form(p: PolygonData) -> PolygonData:
    """Lexicographically least relabeling (lengths, then angles, then kinds)."""
    return min(relabelings(p), key=_sort_key)


def canonical_key(p: PolygonData) -> tuple:
    """Float sort key of the canonical form, for deterministic ordering."""
    c = canonical_form(p)
    return (c.n, tuple(float(x) for x in c.lengths), tuple(a.radians for a in c.angles))


def congruent(p: PolygonData, q: PolygonData, tol: float = CONGRUENCE_TOL) -> bool:
    """True when some relabeling of ``q`` matches ``p`` entrywise within ``tol``.

    Angles are compared in radians.
    """
    if p.n != q.n:
        return False
    if p.n == 0:
        return abs(float(p.perimeter) - float(q.perimeter)) <= tol
    pl = [float(x) for x in p.lengths]
    pa = [a.radians for a in p.angles]
    for r in relabelings(q):
        if r.kinds != p.kinds:
            continue
        if all(abs(x - float(y)) <= tol for x, y in zip(pl, r.lengths)) and all(
            abs(x - b.radians) <= tol for x, b in zip(pa, r.angles)
        ):
            return True
    return False


def dedupe(polys, tol: float = CONGRUENCE_TOL) -> list[PolygonData]:
    out: list[PolygonData] = []
    for p in polys:
        if not any(congruent(p, q, tol) for q in out):
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# geometry


def edge_directions(angles: Sequence[Angle]) -> list[tuple[float, float]]:
    """Unit direction of each edge when the boundary is walked counterclockwise."""
    dirs = []
    phi = 0.0
    for a in angles:
        dirs.append((math.cos(phi), math.sin(phi)))
        phi += math.pi - a.radians
    return dirs


def closure_residual(p: PolygonData) -> float:
    if not p.all_straight:
        raise CurvedEdgeError("closure is only defined for straight edges")
    dirs = edge_directions(p.angles)
    x = math.fsum(float(l) * d[0] for l, d in zip(p.lengths, dirs))
    y = math.fsum(float(l) * d[1] for l, d in zip(p.lengths, dirs))
    return math.hypot(x, y)


def closure_check(p: PolygonData, tol: float = CLOSURE_TOL) -> bool:
    """Do the edge vectors built from the angle sequence sum to zero?"""
    if p.n < 3:
        if not p.all_straight:
            raise CurvedEdgeError("closure is only defined for straight edges")
        return False
    if not all(0 < a.radians < math.pi for a in p.angles):
        return False
    return closure_residual(p) <= tol


def vertices(p: PolygonData) -> list[tuple[float, float]]:
    """Vertex coordinates; vertex j is the end of edge j (angle j sits there)."""
    pts = []
    x = y = 0.0
    for l, d in zip(p.lengths, edge_directions(p.angles)):
        x += float(l) * d[0]
        y += float(l) * d[1]
        pts.append((x, y))
    return pts


def from_vertices(points: Sequence[tuple[float, float]]) -> PolygonData:
    """Perimeter-one polygon from counterclockwise convex vertex coordinates.

    Edge j runs from ``points[j - 1]`` to ``points[j]`` so that the angle at
    ``points[j]`` lands between edges j and j + 1.
    """
    n = len(points)
    if n < 3:
        raise DomainError("need at least three vertices")
    lengths, angles = [], []
    for j in range(n):
        x0, y0 = points[j - 1]
        x1, y1 = points[j]
        lengths.append(math.hypot(x1 - x0, y1 - y0))
    for j in range(n):
        px, py = points[j - 1]
        cx, cy = points[j]
        nx, ny = points[(j + 1) % n]
        ux, uy = cx - px, cy - py
        vx, vy = nx - cx, ny - cy
        turn = math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
        if turn <= 0:
            raise GeometryError("vertices are not in strictly convex counterclockwise order")
        angles.append(math.pi - turn)
    # absorb rounding so the angle sum is exact to the last ulp
    drift = math.fsum(angles) - (n - 2) * math.pi
    angles[-1] -= drift
    total = math.fsum(lengths)
    return PolygonData.make([x / total for x in lengths], [Angle.approx(a) for a in angles])


def triangle_angle(a: float, b: float, c: float) -> float:
    """Angle opposite side ``c`` in a triangle with sides a, b, c.

    Uses the cancellation-free half-angle formula, accurate for needle-like
    triangles where the law of cosines loses digits.
    """
    a, b, c = float(a), float(b), float(c)
    if a < b:
        a, b = b, a
    if b >= c:
        mu = c - (a - b)
    else:
        mu = b - (a - c)
    num = ((a - b) + c) * mu
    den = (a + (b + c)) * ((a - c) + b)
    if num < 0 or den <= 0:
        raise DegenerateError(f"sides {a}, {b}, {c} violate the triangle inequality")
    return 2.0 * math.atan(math.sqrt(num / den))


# ---------------------------------------------------------------------------
# constructors


def _angles3(a1, a2, a3) -> tuple[Angle, Angle, Angle]:
    try:
        return Angle.of(a1), Angle.of(a2), Angle.of(a3)
    except DomainError as exc:
        raise DegenerateError(str(exc)) from exc


def triangle_from_angles(a1, a2, a3) -> PolygonData:
    """Perimeter-one triangle; ``l3 ~ sin a1``, ``l1 ~ sin a2``, ``l2 ~ sin a3``."""
    a1, a2, a3 = _angles3(a1, a2, a3)
    _check_angle_sum((a1, a2, a3))
    if a1 == a2 == a3:
        third = Fraction(1, 3)
        return PolygonData.make((third, third, third), (a1, a2, a3))
    s1, s2, s3 = (math.sin(a.radians) for a in (a1, a2, a3))
    total = s1 + s2 + s3
    return PolygonData.make((s2 / total, s3 / total, s1 / total), (a1, a2, a3))


def triangle_from_lengths(l1, l2, l3) -> PolygonData:
    """Triangle with the given sides (normalized to perimeter one)."""
    ls = [as_scalar(x) for x in (l1, l2, l3)]
    if any(not x > 0 for x in ls):
        raise DegenerateError("side lengths must be positive")
    P = _sum(ls)
    if not 2 * max(ls, key=float) < P:
        raise DegenerateError("side lengths violate the triangle inequality")
    ls = [x / P for x in ls]
    if ls[0] == ls[1] == ls[2]:
        third = Angle.exact(1, 3)
        return PolygonData.make(ls, (third, third, third))
    # a1 is opposite l3, a2 opposite l1
    a1 = triangle_angle(ls[0], ls[1], ls[2])
    a2 = triangle_angle(ls[1], ls[2], ls[0])
    a3 = math.pi - a1 - a2
    return PolygonData.make(ls, (Angle.approx(a1), Angle.approx(a2), Angle.approx(a3)))


def triangle_with_angle(l1, l2, l3, alpha1) -> PolygonData:
    """Triangle with sides (l1, l2, l3) whose angle between l1 and l2 is known.

    ``alpha1`` is kept as given (exact when exact); the other two angles are
    computed from coordinates, which keeps the data consistent.
    """
    alpha1 = Angle.of(alpha1)
    l1, l2, l3 = (as_scalar(x) for x in (l1, l2, l3))
    x = float(l1) * math.cos(alpha1.radians)
    y = float(l1) * math.sin(alpha1.radians)
    a2 = math.atan2(y, float(l2) - x)
    if alpha1.is_exact:
        rem = math.pi * float(1 - alpha1.pi_mult) - a2
    else:
        rem = math.pi - alpha1.radians - a2
    if not (0 < a2 < math.pi and 0 < rem < math.pi):
        raise GeometryError("no triangle with these sides and angle")
    return PolygonData.make((l1, l2, l3), (alpha1, Angle.approx(a2), Angle.approx(rem)))


def _check_short_side(l) -> Scalar:
    l = as_scalar(l)
    if not (0 < l <= Fraction(1, 4)):
        raise RangeError(f"short side {l!r} outside (0, 1/4]")
    return l


def make_rectangle(l) -> PolygonData:
    """Perimeter-one rectangle with sides ``l <= 1/2 - l``."""
    l = _check_short_side(l)
    lp = Fraction(1, 2) - l if is_exact(l) else 0.5 - l
    right = Angle.exact(1, 2)
    return PolygonData.make((l, lp, l, lp), (right,) * 4)


def make_parallelogram(l, a1) -> PolygonData:
    """Perimeter-one parallelogram; ``a1`` sits between the sides l and l'."""
    l = _check_short_side(l)
    try:
        a1 = Angle.of(a1)
    except DomainError as exc:
        raise RangeError(str(exc)) from exc
    lp = Fraction(1, 2) - l if is_exact(l) else 0.5 - l
    if a1.is_exact:
        a2 = Angle(pi_mult=1 - a1.pi_mult)
    else:
        a2 = Angle.approx(math.pi - a1.rad)
    return PolygonData.make((l, lp, l, lp), (a1, a2, a1, a2))


def make_regular(n: int) -> PolygonData:
    if int(n) != n or n < 3:
        raise RangeError(f"regular polygon needs n >= 3, got {n!r}")
    n = int(n)
    return PolygonData.make((Fraction(1, n),) * n, (Angle.exact(n - 2, n),) * n)


def _kite(l, lp, gamma: Angle, alpha: Angle, gamma_p: Angle) -> PolygonData:
    # edges (l, l, l', l') with angles (gamma, alpha, gamma', alpha)
    return PolygonData.make((l, l, lp, lp), (gamma, alpha, gamma_p, alpha))


def _remainder(total_pi, *angles) -> Angle:
    if all(a.is_exact for a in angles):
        return Angle(pi_mult=Fraction(total_pi) - sum((a.pi_mult for a in angles), Fraction(0)))
    return Angle.approx(math.pi * float(total_pi) - math.fsum(a.radians for a in angles))


def make_kite(l, alpha=None, *, gamma=None, gamma_prime=None) -> PolygonData:
    """Perimeter-one kite with sides l <= l' = 1/2 - l.

    Exactly one angle is prescribed: the repeated angle ``alpha`` (between an
    l-edge and an l'-edge), ``gamma`` (between the two l-edges) or
    ``gamma_prime`` (between the two l'-edges).  The other two come from the
    triangle (l, l', diagonal) that makes up half of the kite.
    """
    l = _check_short_side(l)
    lp = Fraction(1, 2) - l if is_exact(l) else 0.5 - l
    given = [x is not None for x in (alpha, gamma, gamma_prime)]
    if sum(given) != 1:
        raise RangeError("prescribe exactly one of alpha, gamma, gamma_prime")
    fl, flp = float(l), float(lp)
    try:
        if alpha is not None:
            alpha = Angle.of(alpha)
            ar = alpha.radians
            # half of gamma sits opposite l'
            hg = math.atan2(flp * math.sin(ar), fl - flp * math.cos(ar))
            gamma = Angle.approx(2 * hg) if 2 * hg < math.pi else None
            if gamma is None:
                raise GeometryError("kite would not be convex")
            gamma_prime = _remainder(2, alpha, alpha, gamma)
        elif gamma is not None:
            gamma = Angle.of(gamma)
            hgp = math.asin(fl / flp * math.sin(gamma.radians / 2))
            gamma_prime = Angle.approx(2 * hgp)
            alpha = Angle.approx(math.pi - gamma.radians / 2 - hgp)
        else:
            gamma_prime = Angle.of(gamma_prime)
            sg = flp / fl * math.sin(gamma_prime.radians / 2)
            if sg >= 1:
                raise GeometryError("no convex kite with this gamma'")
            hg = math.asin(sg)
            gamma = Angle.approx(2 * hg)
            alpha = Angle.approx(math.pi - hg - gamma_prime.radians / 2)
    except DomainError as exc:
        raise GeometryError(str(exc)) from exc
    return _kite(l, lp, gamma, alpha, gamma_prime)


def make_kite_from_angles(gamma, gamma_prime) -> PolygonData:
    """Kite with prescribed gamma >= gamma'; the side ratio follows from them."""
    gamma, gamma_prime = Angle.of(gamma), Angle.of(gamma_prime)
    if gamma.radians < gamma_prime.radians:
        raise RangeError("labeling requires gamma >= gamma'")
    # the repeated angle is half of what gamma and gamma' leave of 2 pi
    if gamma.is_exact and gamma_prime.is_exact:
        half = (2 - gamma.pi_mult - gamma_prime.pi_mult) / 2
        if not 0 < half < 1:
            raise GeometryError("kite would not be convex")
        alpha = Angle(pi_mult=half)
    else:
        half = (2 * math.pi - gamma.radians - gamma_prime.radians) / 2
        if not 0 < half < math.pi:
            raise GeometryError("kite would not be convex")
        alpha = Angle.approx(half)
    ratio = math.sin(gamma_prime.radians / 2) / math.sin(gamma.radians / 2)
    if gamma == gamma_prime:
        l = lp = Fraction(1, 4)
    else:
        l = 0.5 * ratio / (1 + ratio)
        lp = 0.5 - l
    return _kite(l, lp, gamma, alpha, gamma_prime)


def close_polygon(angles: Sequence, partial_lengths: Sequence) -> PolygonData:
    """Solve the last two edge lengths from planar closure, then normalize."""
    angles = [Angle.of(a) for a in angles]
    n = len(angles)
    if len(partial_lengths) != n - 2:
        raise DomainError("give all but the last two edge lengths")
    _check_angle_sum(angles)
    dirs = edge_directions(angles)
    rx = -math.fsum(float(l) * d[0] for l, d in zip(partial_lengths, dirs))
    ry = -math.fsum(float(l) * d[1] for l, d in zip(partial_lengths, dirs))
    (ax, ay), (bx, by) = dirs[n - 2], dirs[n - 1]
    det = ax * by - ay * bx
    if abs(det) < 1e-14:
        raise GeometryError("closure system is singular")
    x = (rx * by - ry * bx) / det
    y = (ax * ry - ay * rx) / det
    if x <= 0 or y <= 0:
        raise GeometryError("closure needs a non-positive edge length")
    lengths = [float(l) for l in partial_lengths] + [x, y]
    total = math.fsum(lengths)
    return PolygonData.make([v / total for v in lengths], angles)


# ---------------------------------------------------------------------------
# reduction


def reduce(p: PolygonData) -> PolygonData:
    """Drop the odd vertices, merging the incident edges into curved ones."""
    n = p.n
    odd = set(p.odd_indices())
    if not odd:
        return p
    kept = [j for j in range(n) if j not in odd]
    if not kept:
        return smooth_domain(p.perimeter)
    lengths, kinds, angles = [], [], []
    for i, k in enumerate(kept):
        prev = kept[i - 1]
        # edges prev+1 .. k (cyclically) form one side of the reduced polygon
        block = []
        j = (prev + 1) % n
        while True:
            block.append(j)
            if j == k:
                break
            j = (j + 1) % n
        lengths.append(_sum(p.lengths[b] for b in block))
        merged = len(block) > 1 or p.kinds[block[0]] == CURVED
        kinds.append(CURVED if merged else STRAIGHT)
        angles.append(p.angles[k])
    return PolygonData.make(lengths, angles, kinds)


# ---------------------------------------------------------------------------
# edge-length multisets


@dataclass(frozen=True)
class EdgeMultiset:
    entries: tuple  # ((length, multiplicity), ...) with increasing lengths

    def values(self) -> list:
        out = []
        for v, m in self.entries:
            out.extend([v] * m)
        return out

    def multiplicity(self, x, tol: float = MULTISET_TOL) -> int:
        for v, m in self.entries:
            if _same(v, x, tol):
                return m
        return 0

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)


def _same(a, b, tol) -> bool:
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def multiset_of(lengths: Sequence, tol: float = MULTISET_TOL) -> EdgeMultiset:
    entries: list[list] = []
    for x in sorted(lengths, key=float):
        if entries and _same(entries[-1][0], x, tol):
            entries[-1][1] += 1
        else:
            entries.append([x, 1])
    return EdgeMultiset(tuple((v, m) for v, m in entries))


def edge_multiset(p: PolygonData, tol: float = MULTISET_TOL) -> EdgeMultiset:
    return multiset_of(p.lengths, tol)


def subset_sums(values: Sequence, cap=None, tol: float = MULTISET_TOL) -> set:
    """All sums of non-empty sub-multisets (bounded by ``cap`` when given)."""
    sums: set = set()
    for v in values:
        new = {v}
        for s in sums:
            t = s + v
            if cap is None or t <= cap + (0 if is_exact(t) else tol):
                new.add(t)
        sums |= new
    return sums


def is_subset_sum(values: Sequence, target, tol: float = MULTISET_TOL) -> bool:
    values = list(values)
    if all(is_exact(v) for v in values) and is_exact(target):
        target = Fraction(target)
        den = math.lcm(target.denominator, *(Fraction(v).denominator for v in values))
        goal = int(target * den)
        reach = 1
        mask = (1 << (goal + 1)) - 1
        for v in values:
            reach = (reach | (reach << int(Fraction(v) * den))) & mask
        return goal > 0 and bool(reach >> goal & 1)
    return any(abs(float(s) - float(target)) <= tol for s in subset_sums(values, target, tol))


def l_star_of(lengths: Sequence, tol: float = MULTISET_TOL) -> list:
    """Distinct lengths that are not a sum of two or more smaller lengths."""
    ms = multiset_of(lengths, tol)
    values = ms.values()
    out = []
    for v, _ in ms.entries:
        smaller = [w for w in values if float(w) < float(v) and not _same(w, v, tol)]
        if not is_subset_sum(smaller, v, tol):
            out.append(v)
    return out


def l_star(p: PolygonData, tol: float = MULTISET_TOL) -> list:
    return l_star_of(p.lengths, tol)
