import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _gen import random_convex
from steklov.charpoly import TrigPoly, char_poly, cos_poly
from steklov.errors import HorizonMismatch, ResolutionError
from steklov.numerics import Angle
from steklov.polygon import make_regular, triangle_from_angles
from steklov.quasieig import compare_spectra, roots

A = Angle.exact


def test_smooth_domain_roots():
    spec = roots(cos_poly(F(1), F(-1)), 20.0)
    assert spec.roots == pytest.approx([0, 2 * math.pi, 4 * math.pi, 6 * math.pi], abs=1e-9)
    assert all(spec.tangential)


def test_equilateral_roots():
    spec = roots(cos_poly(F(1), F(1)), 20.0)
    assert spec.roots == pytest.approx([math.pi, 3 * math.pi, 5 * math.pi], abs=1e-9)
    assert all(spec.tangential)


def test_collision_pair_spectra_agree():
    a = char_poly(triangle_from_angles(A(1, 3), A(1, 15), A(3, 5)))
    b = char_poly(triangle_from_angles(A(1, 5), A(1, 5), A(3, 5)))
    cmp = compare_spectra(roots(a, 60.0), roots(b, 60.0))
    assert cmp.count_diff == 0 and cmp.max_gap <= 1e-10


def test_interleaved_spectra():
    cmp = compare_spectra(roots(cos_poly(F(1), F(-1)), 20.0), roots(cos_poly(F(1), F(1)), 20.0))
    assert cmp.max_gap == pytest.approx(math.pi, abs=1e-9)
    assert cmp.count_diff == 1


def test_self_comparison():
    s = roots(char_poly(make_regular(5)), 40.0)
    assert compare_spectra(s, s).max_gap == 0


def test_horizon_mismatch():
    P = cos_poly(F(1), F(0))
    with pytest.raises(HorizonMismatch):
        compare_spectra(roots(P, 10.0), roots(P, 20.0))


def test_step_too_coarse():
    with pytest.raises(ResolutionError):
        roots(cos_poly(F(1), F(0)), 10.0, step=2.0)


def test_pentagon_double_roots_are_tangential():
    spec = roots(char_poly(make_regular(5)), 60.0)
    P = char_poly(make_regular(5))
    for r, t in zip(spec.roots, spec.tangential):
        assert abs(P(r)) < 1e-8
        if t:
            assert abs(P.deriv(r)) < 1e-5


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_sign_change_roots_bracket(n, seed):
    P = char_poly(random_convex(np.random.default_rng(seed), n))
    spec = roots(P, 30.0)
    d = spec.tol * 10
    for r, tang in zip(spec.roots, spec.tangential):
        if not tang and r > d:
            assert P(r - d) * P(r + d) < 0


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_halving_step_keeps_roots(n, seed):
    P = char_poly(random_convex(np.random.default_rng(seed), n))
    coarse = roots(P, 30.0)
    fine = roots(P, 30.0, step=coarse.step / 2)
    for r, tang in zip(coarse.roots, coarse.tangential):
        if not tang:
            assert min(abs(r - x) for x in fine.roots) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_equal_polynomials_equal_spectra(n, seed):
    P = char_poly(random_convex(np.random.default_rng(seed), n))
    Q = TrigPoly.build(list(P.terms), P.const)
    cmp = compare_spectra(roots(P, 25.0), roots(Q, 25.0))
    assert cmp.count_diff == 0 and cmp.max_gap <= 2e-12
