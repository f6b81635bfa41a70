import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from _gen import float_triangle, one_odd_triangle, two_odd_triangle
from steklov.charpoly import TrigPoly, char_poly, cos_poly, poly_equal
from steklov.errors import AmbiguousError, FamilyError, GeometryError, NoSolutionError, RangeError
from steklov.inverse import (
    detect_rectangle,
    detect_regular,
    odd_pairs,
    reconstruct,
    reconstruct_kite,
    reconstruct_parallelogram,
    reconstruct_regular,
    reconstruct_triangle,
    sine_ratio,
    triangle_odd_count,
)
from steklov.numerics import Angle, is_odd
from steklov.polygon import (
    congruent,
    make_kite,
    make_kite_from_angles,
    make_parallelogram,
    make_rectangle,
    make_regular,
    triangle_from_angles,
    triangle_from_lengths,
)

A = Angle.exact
SELF = 1e-8


def contains(res, p):
    return any(congruent(c, p, 1e-9) for c in res.candidates)


def self_consistent(res, P):
    return all(poly_equal(char_poly(c), P, SELF) for c in res.candidates)


# ---------------------------------------------------------------------------
# triangles


def test_equilateral():
    res = reconstruct_triangle(cos_poly(F(1), F(1)))
    assert res.classification == "Equilateral" and len(res.candidates) == 1
    assert res.candidates[0].angles == (A(1, 3),) * 3


def test_two_odd_collision_pair():
    res = reconstruct_triangle(TrigPoly.build([(F(1), F(1))], F(-1, 2)))
    assert res.classification == "TriangleTwoOdd"
    a = triangle_from_angles(A(1, 3), A(1, 15), A(3, 5))
    b = triangle_from_angles(A(1, 5), A(1, 5), A(3, 5))
    assert len(res.candidates) == 2 and contains(res, a) and contains(res, b)


def test_two_odd_known_angle_filters():
    res = reconstruct_triangle(TrigPoly.build([(F(1), F(1))], F(-1, 2)), known_angle=A(1, 15))
    assert len(res.candidates) == 1
    assert res.candidates[0].angles.count(A(1, 15)) == 1


def test_two_odd_pair_bound():
    # with denominators capped at 10 only the isosceles (pi/5, pi/5) pair remains
    res = reconstruct_triangle(TrigPoly.build([(F(1), F(1))], F(-1, 2)), pair_bound=10)
    assert len(res.candidates) == 1
    assert sorted(res.candidates[0].angles, key=lambda a: a.pi_mult) == [A(1, 5), A(1, 5), A(3, 5)]
    with pytest.raises(NoSolutionError):
        reconstruct_triangle(TrigPoly.build([(F(1), F(1))], F(-1, 2)), pair_bound=3)


def test_no_odd_unique():
    T = triangle_from_lengths(0.26, 0.35, 0.39)
    res = reconstruct_triangle(char_poly(T))
    assert res.classification == "TriangleNoOdd"
    assert len(res.candidates) == 1 and contains(res, T)


def test_triangle_with_a_sixty_degree_angle():
    # lengths (1/4, 7/20, 2/5) have an angle of exactly pi/3, so one odd angle
    T = triangle_from_lengths(0.25, 0.35, 0.40)
    P = char_poly(T)
    assert triangle_odd_count(P) == 1
    res = reconstruct_triangle(P)
    assert len(res.candidates) == 1 and contains(res, T)


def test_sine_ratio_values():
    P1 = char_poly(triangle_from_angles(A(1, 7), A(1, 2), A(5, 14)))
    P2 = char_poly(triangle_from_angles(A(1, 15), A(1, 10), A(5, 6)))
    assert float(sine_ratio(P1)) == pytest.approx(4.38, abs=5e-3)
    assert float(sine_ratio(P2)) == pytest.approx(3.89, abs=5e-3)
    iso = triangle_from_angles(A(1, 5), A(2, 5), A(2, 5))
    # odd apex between the equal sides: ratio 2 l1 / l3
    l1, l2, l3 = (float(x) for x in iso.lengths)
    assert float(sine_ratio(char_poly(iso))) == pytest.approx(2 * l1 / l3, abs=1e-12)


def test_triangle_family_rejects_pentagon():
    with pytest.raises((NoSolutionError, FamilyError)):
        reconstruct_triangle(char_poly(make_regular(5)))


def test_odd_pairs():
    assert odd_pairs(F(2, 5), 100) == [(3, 15), (5, 5)]
    assert odd_pairs(F(4, 15), 100) == [(5, 15)]
    pairs = odd_pairs(F(8, 21), 1000)
    assert all(F(1, p) + F(1, q) == F(8, 21) and p % 2 and q % 2 for p, q in pairs)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0, 1, 2]))
def test_triangle_round_trip(seed, kind):
    rng = np.random.default_rng(seed)
    T = (float_triangle, one_odd_triangle, two_odd_triangle)[kind](rng)
    P = char_poly(T)
    assert triangle_odd_count(P) == kind
    res = reconstruct_triangle(P)
    assert contains(res, T)
    assert self_consistent(res, P)
    assert len(res.candidates) <= (1, 4, 10**6)[kind]


def test_odd_count_exhaustive():
    # every rational triangle with angle denominators <= 24
    fr = sorted({F(p, q) for q in range(2, 25) for p in range(1, q)})
    for a in fr:
        for b in fr:
            c = 1 - a - b
            if c <= 0 or c.denominator > 24 or not (a <= b <= c):
                continue
            angles = [Angle(pi_mult=x) for x in (a, b, c)]
            T = triangle_from_angles(*angles)
            assert triangle_odd_count(char_poly(T)) == sum(is_odd(x) for x in angles)


# ---------------------------------------------------------------------------
# quadrilaterals


def test_rectangle_detection():
    assert detect_rectangle(char_poly(make_rectangle(F(1, 4)))) == (F(1, 4), F(1, 4))
    assert detect_rectangle(char_poly(make_rectangle(F(1, 6)))) == (F(1, 6), F(1, 3))
    assert detect_rectangle(cos_poly(F(1), F(1))) is None


def test_parallelogram_branches():
    assert reconstruct_parallelogram(char_poly(make_rectangle(F(1, 4)))).classification == "Rectangle"
    rh = make_parallelogram(F(1, 4), A(2, 3))
    res = reconstruct_parallelogram(char_poly(rh))
    assert res.classification == "ParallelogramOddPair"
    assert "lengths=FREE" in res.notes
    assert res.candidates[0].angles[0] == A(2, 3)
    p = make_parallelogram(F(1, 8), A(3, 4))
    res = reconstruct_parallelogram(char_poly(p))
    assert res.classification == "ParallelogramNoOdd"
    assert 1 <= len(res.candidates) <= 2 and contains(res, p)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, 0.24), st.floats(0.52, 0.95))
def test_parallelogram_round_trip(l, a):
    p = make_parallelogram(l, Angle.approx(a * math.pi))
    P = char_poly(p)
    res = reconstruct_parallelogram(P)
    assert contains(res, p) and len(res.candidates) <= 2
    assert self_consistent(res, P)


def test_kite_examples():
    k = make_kite(0.15, Angle.approx(1.7))
    res = reconstruct_kite(char_poly(k))
    assert res.classification == "KiteNoOdd" and contains(res, k) and len(res.candidates) <= 2
    with pytest.raises(AmbiguousError) as info:
        reconstruct_kite(char_poly(make_kite(F(1, 5), gamma_prime=A(1, 5))))
    assert info.value.case == "b"
    two = make_kite_from_angles(A(1, 3), A(1, 5))
    res = reconstruct_kite(char_poly(two))
    assert res.classification == "KiteTwoUnequalOdd" and len(res.candidates) == 1 and contains(res, two)
    assert reconstruct_kite(char_poly(make_rectangle(F(1, 4)))).classification == "Square"


@settings(max_examples=40, deadline=None)
@given(st.floats(0.03, 0.24), st.floats(0.4, 0.95))
def test_kite_no_odd_round_trip(l, a):
    try:
        k = make_kite(l, Angle.approx(a * math.pi))
    except (GeometryError, RangeError):
        assume(False)
    P = char_poly(k)
    res = reconstruct_kite(P)
    assert contains(res, k) and len(res.candidates) <= 2
    assert self_consistent(res, P)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.03, 0.24), st.sampled_from([3, 5, 7, 9, 11]), st.booleans())
def test_kite_one_odd_round_trip(l, q, odd_gamma):
    try:
        k = make_kite(l, gamma=A(1, q)) if odd_gamma else make_kite(l, gamma_prime=A(1, q))
    except (GeometryError, RangeError):
        assume(False)
    P = char_poly(k)
    try:
        res = reconstruct_kite(P)
    except AmbiguousError:
        assume(False)  # excluded length coincidences
    assert contains(res, k) and len(res.candidates) <= 3
    assert self_consistent(res, P)


def test_regular():
    assert detect_regular(char_poly(make_regular(5))) == 5
    assert reconstruct_regular(cos_poly(F(1), F(1))).candidates[0].n == 3
    assert detect_regular(char_poly(make_rectangle(F(1, 6)))) is None
    assert reconstruct(char_poly(make_regular(7)), "regular").candidates[0].n == 7


def test_dispatch():
    assert reconstruct(char_poly(make_rectangle(F(1, 6))), "rectangle").classification == "Rectangle"
    assert reconstruct(cos_poly(F(1), F(1)), "rectangle").classification == "NotInFamily"
    with pytest.raises(FamilyError):
        reconstruct(cos_poly(F(1), F(1)), "hexagon")


def test_top_term_required():
    with pytest.raises(FamilyError):
        reconstruct_triangle(TrigPoly.build([(F(1), F(2))], F(0)))
