"""End-to-end acceptance criteria with their tolerances and runtime limits.

Each test times only its core computation; oracles and fixture building
stay outside the clock.  Sub-millisecond limits are judged on the best of
several warm calls so that interpreter noise does not decide the outcome.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import bisect

from _gen import float_triangle, one_odd_triangle, random_convex, two_odd_triangle
from steklov.charpoly import TrigPoly, char_poly, cos_poly, poly_equal, term_count
from steklov.inverse import reconstruct_triangle, triangle_odd_count
from steklov.numerics import Angle, s_of
from steklov.polygon import congruent, make_rectangle, make_regular, reduce, triangle_from_angles
from steklov.quasieig import roots
from steklov.search import (
    find_charpoly_collisions_triangles,
    quad_vs_equilateral,
    smooth_candidate_pentagons,
)

F = Fraction
pytestmark = pytest.mark.acceptance


def best_of(fn, repeats=20):
    fn()
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def clock(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


@pytest.mark.criterion(1, "square closed form, exact", 0.001)
def test_square_closed_form(timing):
    sq = make_rectangle(F(1, 4))
    P, dt = best_of(lambda: char_poly(sq))
    timing(dt)
    assert P.terms == ((F(1, 2), F(4)), (F(1), F(1)))
    assert P.const == F(3)
    assert P.is_exact
    assert dt < 1e-3


@pytest.mark.criterion(2, "regular pentagon coefficients", 0.001)
def test_regular_pentagon(timing):
    pent = make_regular(5)
    P, dt = best_of(lambda: char_poly(pent))
    timing(dt)
    expected = {F(1, 5): 105 / 16, F(3, 5): 15 / 4, F(1): 1.0}
    assert len(P.terms) == 3
    for f, c in P.terms:
        assert abs(float(c) - expected[f]) <= 1e-12
    assert abs(float(P.const) + 1 / 32) <= 1e-12
    assert dt < 1e-3


@pytest.mark.criterion(3, "triangle collision group at q_max=15", 10)
def test_triangle_collision(timing):
    rep, dt = clock(lambda: find_charpoly_collisions_triangles(15))
    timing(dt)
    a = triangle_from_angles(Angle.exact(1, 3), Angle.exact(1, 15), Angle.exact(3, 5))
    b = triangle_from_angles(Angle.exact(1, 5), Angle.exact(1, 5), Angle.exact(3, 5))
    hit = [h for h in rep.hits if any(congruent(x, a) for x in h.items) and any(congruent(x, b) for x in h.items)]
    assert len(hit) == 1
    Pa, Pb = char_poly(a), char_poly(b)
    # the lengths come from the law of sines, so only the constants are exact
    assert isinstance(Pa.const, F) and isinstance(Pb.const, F)
    assert Pa.const == Pb.const == F(-1, 2)
    assert poly_equal(Pa, Pb)
    assert poly_equal(hit[0].poly, Pa)
    assert not congruent(a, b)
    assert dt < 10


def _triangle_sample(rng):
    out = []
    for i in range(500):
        kind = i % 3
        if kind == 0:
            out.append((float_triangle(rng), 0))
        elif kind == 1:
            out.append((one_odd_triangle(rng), 1))
        else:
            out.append((two_odd_triangle(rng), 2))
    return out


@pytest.mark.criterion(4, "triangle reconstruction round trip (500)", 30)
def test_triangle_round_trip(timing):
    rng = np.random.default_rng(20240604)
    sample = _triangle_sample(rng)
    polys = [(T, k, char_poly(T)) for T, k in sample]

    def run():
        return [reconstruct_triangle(P) for _, _, P in polys]

    results, dt = clock(run)
    timing(dt)
    bound = {0: 1, 1: 4}
    failures = []
    for (T, k, P), res in zip(polys, results):
        if triangle_odd_count(P) != len(T.odd_indices()):
            failures.append(("odd-count", T))
        if not any(congruent(c, T, 1e-9) for c in res.candidates):
            failures.append(("missing", T))
        if k in bound and len(res.candidates) > bound[k]:
            failures.append(("too-many", T, len(res.candidates)))
    assert not failures, failures[:5]
    assert dt < 30


@pytest.mark.criterion(5, "admissible n-gons have 2^(n-1) terms", 10)
def test_admissible_term_count(timing):
    rng = np.random.default_rng(5)
    polys = [(n, random_convex(rng, n)) for n in range(3, 9) for _ in range(100)]
    counts, dt = clock(lambda: [(n, term_count(char_poly(p))) for n, p in polys])
    timing(dt)
    bad = [(n, c) for n, c in counts if c != 2 ** (n - 1)]
    assert not bad, bad[:5]
    assert dt < 10


PENTAGONS = {
    tuple(sorted(F(a, b) for a, b in row))
    for row in [
        [(1, 6), (1, 6), (1, 6), (1, 6), (1, 3)],
        [(1, 8), (1, 8), (1, 8), (2, 8), (3, 8)],
        [(1, 10), (1, 10), (1, 10), (3, 10), (4, 10)],
        [(1, 8), (1, 8), (2, 8), (2, 8), (2, 8)],
        [(1, 10), (1, 10), (2, 10), (2, 10), (4, 10)],
        [(1, 10), (1, 10), (2, 10), (3, 10), (3, 10)],
        [(1, 12), (1, 12), (2, 12), (3, 12), (5, 12)],
        [(1, 12), (1, 12), (2, 12), (4, 12), (4, 12)],
        [(1, 14), (1, 14), (1, 7), (2, 7), (3, 7)],
        [(1, 6), (1, 6), (1, 6), (1, 4), (1, 4)],
        [(1, 7), (1, 7), (3, 14), (3, 14), (2, 7)],
    ]
}
PENTAGONS_LSTAR2 = {tuple(sorted([F(1, 6)] * 3 + [F(1, 4)] * 2)), tuple(sorted([F(1, 7)] * 2 + [F(3, 14)] * 2 + [F(2, 7)]))}


@pytest.mark.criterion(6, "eleven smooth-candidate pentagons", 60)
def test_pentagon_multisets(timing):
    rep, dt = clock(lambda: smooth_candidate_pentagons(q_max=14, odd_angle=False))
    timing(dt)
    found = {tuple(sorted(h.items)): h.info["lstar_size"] for h in rep.hits}
    assert len(rep.hits) == 11
    assert set(found) == PENTAGONS
    assert {ms for ms, k in found.items() if k == 2} == PENTAGONS_LSTAR2
    assert sum(1 for k in found.values() if k == 1) == 9
    assert dt < 60


@pytest.mark.criterion(7, "odd-angle pentagon patterns", 10)
def test_odd_pentagon_patterns(timing):
    rep, dt = clock(lambda: smooth_candidate_pentagons(q_max=14, odd_angle=True))
    timing(dt)
    pats = {tuple(h.items) for h in rep.hits}  # (l3, l4, l5, l1 + l2)
    assert pats == {
        (F(1, 4), F(1, 4), F(1, 4), F(1, 4)),
        (F(1, 6), F(1, 3), F(1, 6), F(1, 3)),
        (F(1, 3), F(1, 6), F(1, 3), F(1, 6)),
    }
    assert dt < 10


@pytest.mark.criterion(8, "no triangle or quadrilateral matches cos t - 1", 30)
def test_smooth_distinguishability(timing):
    rng = np.random.default_rng(8)
    polys = [random_convex(rng, 3) for _ in range(1000)] + [random_convex(rng, 4) for _ in range(1000)]
    target = cos_poly(F(1), F(-1))
    hits, dt = clock(lambda: sum(poly_equal(char_poly(p), target, 1e-10) for p in polys))
    timing(dt)
    assert hits == 0
    assert dt < 30


def _odd_fixed(rng, n):
    k = int(rng.integers(1, 3))
    idx = rng.choice(n, size=k, replace=False)
    fixed = {}
    for j in idx:
        fixed[int(j)] = Angle.exact(1, int(rng.choice([3, 5, 7, 9, 11])))
    return fixed


@pytest.mark.criterion(9, "reduction relation on 200 polygons", 10)
def test_reduction_relation(timing):
    rng = np.random.default_rng(9)
    polys = []
    while len(polys) < 200:
        n = int(rng.integers(3, 7))
        fixed = _odd_fixed(rng, n)
        turning = sum(math.pi - a.radians for a in fixed.values())
        if not 0.1 * (n - len(fixed)) < 2 * math.pi - turning < 0.9 * math.pi * (n - len(fixed)):
            continue
        try:
            polys.append(random_convex(rng, n, fixed, tries=500))
        except RuntimeError:
            continue  # e.g. two adjacent sharp odd angles rarely close up

    def run():
        return [(p, char_poly(p), char_poly(reduce(p))) for p in polys]

    out, dt = clock(run)
    timing(dt)
    for p, P, R in out:
        assert 1 <= len(p.odd_indices()) <= 2
        assert poly_equal(TrigPoly(P.terms, 0.0), TrigPoly(R.terms, 0.0), 1e-12)
        parity = math.prod(float(s_of(p.angles[j])) for j in p.odd_indices())
        Q = math.prod(float(s_of(a)) for j, a in enumerate(p.angles) if j not in p.odd_indices())
        assert abs((float(P.const) - float(R.const)) - (1 - parity) * Q) <= 1e-12
    assert dt < 10


def _oracle_roots(T=50.0, h=1e-4):
    # the square polynomial is 8 cos^4(t/4); its zeros are the simple zeros of cos(t/4)
    g = lambda t: math.cos(t / 4)
    ts = np.arange(0.0, T + h, h)
    vals = np.cos(ts / 4)
    idx = np.nonzero(vals[:-1] * vals[1:] < 0)[0]
    return [bisect(g, ts[i], ts[i + 1], xtol=1e-14) for i in idx]


@pytest.mark.criterion(10, "square quasi-roots vs dense oracle", 5)
def test_square_roots(timing):
    P = char_poly(make_rectangle(F(1, 4)))
    ts = np.linspace(0, 50, 2001)
    assert np.allclose(P(ts), 8 * np.cos(ts / 4) ** 4, atol=1e-12)
    oracle = _oracle_roots()
    spec, dt = clock(lambda: roots(P, 50.0))
    timing(dt)
    assert len(spec.roots) == len(oracle) == 4
    assert max(abs(a - b) for a, b in zip(spec.roots, oracle)) <= 1e-8
    assert dt < 5


@pytest.mark.criterion(11, "quadrilateral vs equilateral sweep, index_max=5", 60)
def test_quad_vs_equilateral(timing):
    rep, dt = clock(lambda: quad_vs_equilateral(5))
    timing(dt)
    opposite = [h for h in rep.hits if (h.info["k"] + h.info["j"]) % 2 == 1]
    assert len(opposite) == 6
    for h in opposite:
        k, j = h.info["k"], h.info["j"]
        a1, a3 = 1 / (2 * k + 1), 1 / (2 * j + 1)
        a2 = a4 = (2 - a1 - a3) / 2
        gap = math.pi / (2 * a2) - math.pi / (2 * a4)
        assert abs(math.cos(gap) - 1) <= 1e-12
        assert h.info["opposite_parity"] and h.info["odd_non_adjacent"]
        assert h.info["formal_poly_is_cos_t_plus_1"]
        assert h.info["min_residual"] > 1e-6
        assert not h.info["feasible"]
    assert not any(h.info["feasible"] for h in rep.hits)
    assert dt < 60
