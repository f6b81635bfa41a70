import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest

from _gen import random_convex
from steklov.charpoly import char_poly, poly_equal
from steklov.numerics import Angle
from steklov.polygon import PolygonData, make_regular, triangle_from_angles
from steklov.search import (
    find_charpoly_collisions_triangles,
    lstar_bound,
    quad_conditions,
    quad_vs_equilateral,
    smooth_candidate_pentagons,
    smooth_check,
)

A = Angle.exact


def _triangle_groups_by_brute_force(q_max):
    """Pairwise comparison of all rational triangles, no hashing."""
    fr = sorted({F(p, q) for q in range(2, q_max + 1) for p in range(1, q)})
    tris = []
    for a, b in itertools.combinations_with_replacement(fr, 2):
        c = 1 - a - b
        if c > 0 and c.denominator <= q_max and b <= c:
            T = triangle_from_angles(*(Angle(pi_mult=x) for x in (a, b, c)))
            tris.append((T, char_poly(T)))
    pairs = 0
    for (_, P), (_, Q) in itertools.combinations(tris, 2):
        pairs += poly_equal(P, Q, 1e-12)
    return pairs


def test_no_collisions_at_q4():
    assert find_charpoly_collisions_triangles(4).hits == []
    assert _triangle_groups_by_brute_force(4) == 0


def test_collisions_match_brute_force():
    rep = find_charpoly_collisions_triangles(15)
    pairs = sum(math.comb(len(h.items), 2) for h in rep.hits)
    assert pairs == _triangle_groups_by_brute_force(15)


def test_collision_members_share_polynomial_and_odd_count():
    for h in find_charpoly_collisions_triangles(15).hits:
        odd = {len(T.odd_indices()) for T in h.items}
        assert len(odd) == 1
        assert all(poly_equal(char_poly(T), h.poly, 1e-12) for T in h.items)


def test_collisions_monotone_in_bound():
    small = find_charpoly_collisions_triangles(10)
    big = find_charpoly_collisions_triangles(20)
    key = lambda h: tuple(tuple(a.pi_mult for a in T.angles) for T in h.items)
    big_members = {tuple(a.pi_mult for a in T.angles) for h in big.hits for T in h.items}
    for h in small.hits:
        assert all(tuple(a.pi_mult for a in T.angles) in big_members for T in h.items)
    assert len({key(h) for h in small.hits}) == len(small.hits)


def test_quad_conditions():
    c = quad_conditions(1, 2)
    assert all(c.values())
    assert not quad_conditions(1, 3)["opposite_parity"]


def test_quad_sweep_rejects_same_parity():
    rep = quad_vs_equilateral(3)
    same = [h for h in rep.hits if h.info["k"] == 1 and h.info["j"] == 3]
    assert same[0].info["rejected"] == "same-parity" and not same[0].info["feasible"]


def test_quad_closure_lower_bound_matches_sweep():
    rep = quad_vs_equilateral(3)
    for h in rep.hits:
        if h.info.get("min_residual") is not None:
            assert h.info["linear_rank"] == 1
            assert h.info["min_residual"] == pytest.approx(h.info["lower_bound"], abs=1e-8)


def test_lstar_bound_table():
    assert lstar_bound(5, 0) == 2 and lstar_bound(6, 0) == 2


def test_smooth_check_triangle_fails():
    rep = smooth_check(triangle_from_angles(A(1, 2), A(1, 3), A(1, 6)))
    assert not rep.passed
    assert not rep.conditions["direct_poly_test"]
    assert not rep.conditions["n_at_least_5"]


def test_equilateral_pentagon_fails_boundary_split():
    rep = smooth_check(make_regular(5))
    assert not rep.conditions["boundary_split"]
    assert not rep.passed


def test_hexagon_lstar_condition():
    L = [F(1, 16), F(1, 8), F(1, 8), F(3, 16), F(1, 4), F(1, 4)]
    hexagon = PolygonData.make(L, [A(2, 3)] * 6)
    rep = smooth_check(hexagon)
    assert rep.conditions["lstar_size_bound"]


def test_smooth_check_random_quads_never_match():
    rng = np.random.default_rng(11)
    for _ in range(100):
        assert not smooth_check(random_convex(rng, 4)).conditions["direct_poly_test"]


def test_pentagons_small_bound_is_subset():
    full = {tuple(h.items) for h in smooth_candidate_pentagons(14).hits}
    small = {tuple(h.items) for h in smooth_candidate_pentagons(6).hits}
    assert small <= full
    assert small == {ms for ms in full if all(x.denominator <= 6 for x in ms)}


def test_pentagon_search_is_deterministic():
    a = smooth_candidate_pentagons(14)
    b = smooth_candidate_pentagons(14)
    assert [h.items for h in a.hits] == [h.items for h in b.hits]
