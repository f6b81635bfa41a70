"""The characteristic polynomial of a curvilinear polygon.

``P(t) = sum_[xi] a_xi cos(|xi . l| t) - prod_j s(alpha_j)`` where the sum
runs over sign vectors modulo a global sign flip and ``a_xi`` multiplies
``c(alpha_j)`` over the cyclic sign changes of ``xi``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple, Sequence

import numpy as np

from . import _kernels
from .numerics import (
    EPS,
    ONE,
    ZERO,
    Scalar,
    angle_class,
    c_of,
    is_exact,
    product,
    s_of,
)
from .polygon import PolygonData, make_regular

POLY_TOL = 1e-12

SignClass = tuple


# ---------------------------------------------------------------------------
# TrigPoly


def _is_zero_freq(f, tol) -> bool:
    return f == 0 if is_exact(f) else abs(f) < tol


def _is_negligible(c, tol) -> bool:
    return c == 0 if is_exact(c) else abs(c) < tol


def _merge(pairs, tol: float):
    """Sum coefficients of equal frequencies (exact) or near-equal ones (float)."""
    if all(is_exact(f) for f, _ in pairs):
        acc: dict = {}
        for f, c in pairs:
            acc[f] = acc.get(f, ZERO) + c
        return sorted(acc.items())
    merged: list[list] = []
    for f, c in sorted(pairs, key=lambda fc: float(fc[0])):
        if merged and abs(float(f) - float(merged[-1][0])) <= tol * max(1.0, float(merged[-1][0])):
            if is_exact(f) and not is_exact(merged[-1][0]):
                merged[-1][0] = f
            merged[-1][1] = merged[-1][1] + c
        else:
            merged.append([f, c])
    return [(f, c) for f, c in merged]


@dataclass(frozen=True)
class TrigPoly:
    """``const + sum_k coef_k cos(freq_k t)`` with strictly increasing positive freqs."""

    terms: tuple  # ((freq, coef), ...)
    const: Scalar = ZERO

    @classmethod
    def build(cls, pairs, const=ZERO, tol: float = POLY_TOL) -> "TrigPoly":
        """Canonicalize raw (freq, coef) pairs.

        Negative frequencies are reflected, zero ones fold into the constant,
        equal ones merge, and coefficients below ``tol`` are dropped.
        """
        const_acc = const
        live = []
        for f, c in pairs:
            f = abs(f)
            if _is_zero_freq(f, tol):
                const_acc = const_acc + c
            else:
                live.append((f, c))
        terms = tuple((f, c) for f, c in _merge(live, tol) if not _is_negligible(c, tol))
        if not is_exact(const_acc) and abs(const_acc) < tol:
            const_acc = 0.0
        return cls(terms, const_acc)

    @property
    def freqs(self) -> list:
        return [f for f, _ in self.terms]

    @property
    def coefs(self) -> list:
        return [c for _, c in self.terms]

    @property
    def f_max(self) -> float:
        return max((float(f) for f, _ in self.terms), default=0.0)

    @property
    def is_exact(self) -> bool:
        return is_exact(self.const) and all(is_exact(f) and is_exact(c) for f, c in self.terms)

    def coef_at(self, freq, tol: float = 1e-9) -> Scalar:
        for f, c in self.terms:
            if (is_exact(f) and is_exact(freq) and f == freq) or abs(float(f) - float(freq)) <= tol:
                return c
        return ZERO

    def without(self, freq, tol: float = 1e-9) -> "TrigPoly":
        keep = tuple(
            (f, c) for f, c in self.terms if not abs(float(f) - float(freq)) <= tol
        )
        return TrigPoly(keep, self.const)

    def _arrays(self):
        f = np.array([float(x) for x in self.freqs], dtype=np.float64)
        c = np.array([float(x) for x in self.coefs], dtype=np.float64)
        return f, c

    def __call__(self, t):
        f, c = self._arrays()
        out = _kernels.eval_trig(f, c, float(self.const), t)
        return float(out[0]) if np.ndim(t) == 0 else out

    def deriv(self, t):
        f, c = self._arrays()
        out = _kernels.deriv_trig(f, c, t)
        return float(out[0]) if np.ndim(t) == 0 else out

    def __repr__(self):
        from .numerics import format_scalar

        body = " + ".join(f"{format_scalar(c)}*cos({format_scalar(f)}t)" for f, c in self.terms)
        return f"TrigPoly({body or '0'} + {format_scalar(self.const)})"


def term_count(P: TrigPoly) -> int:
    return len(P.terms)


def cos_poly(freq=ONE, const=ZERO) -> TrigPoly:
    """``cos(freq t) + const``; e.g. the smooth-domain polynomial ``cos t - 1``."""
    return TrigPoly.build([(freq, ONE)], const)


# ---------------------------------------------------------------------------
# comparison


class PolyComparison(NamedTuple):
    equal: bool
    exact: bool  # both inputs exact, so the comparison was exact
    demoted: bool  # mixed exact/float inputs fell back to tolerance
    max_freq_gap: float
    max_coef_gap: float


def _cluster(terms, tol):
    out: list[list] = []
    for f, c in terms:
        if out and abs(float(f) - float(out[-1][0])) <= tol * max(1.0, float(out[-1][0])):
            out[-1][1] = out[-1][1] + c
        else:
            out.append([f, c])
    return [(f, c) for f, c in out if not (abs(float(c)) <= tol and not (is_exact(c) and c != 0))]


def poly_compare(a: TrigPoly, b: TrigPoly, tol: float = POLY_TOL) -> PolyComparison:
    """Term-by-term comparison of two canonical polynomials.

    Frequencies match within ``tol * max(1, f)``, coefficients and constants
    within ``tol``.  Terms whose coefficient is at most ``tol`` are ignored
    on both sides (they are indistinguishable from rounding).  Two exact
    inputs compare exactly.
    """
    if a.is_exact and b.is_exact:
        eq = a.terms == b.terms and a.const == b.const
        return PolyComparison(eq, True, False, 0.0 if eq else math.inf, 0.0 if eq else math.inf)
    demoted = a.is_exact != b.is_exact
    ta, tb = _cluster(a.terms, tol), _cluster(b.terms, tol)
    cgap = abs(float(a.const) - float(b.const))
    if len(ta) != len(tb):
        return PolyComparison(False, False, demoted, math.inf, cgap)
    fgap = 0.0
    for (fa, ca), (fb, cb) in zip(ta, tb):
        fgap = max(fgap, abs(float(fa) - float(fb)) / max(1.0, float(fa)))
        cgap = max(cgap, abs(float(ca) - float(cb)))
    return PolyComparison(fgap <= tol and cgap <= tol, False, demoted, fgap, cgap)


def poly_equal(a: TrigPoly, b: TrigPoly, tol: float = POLY_TOL) -> bool:
    return poly_compare(a, b, tol).equal


# ---------------------------------------------------------------------------
# sign classes


def enumerate_sign_classes(n: int) -> list[SignClass]:
    """Representatives with xi_1 = +1, binary counting on xi_2..xi_n (xi_n fastest)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [(1,) + tuple(-1 if b else 1 for b in bits) for bits in itertools.product((0, 1), repeat=n - 1)]


def sign_changes(s: SignClass) -> list[int]:
    """Indices j with xi_j != xi_{j+1} (cyclic), i.e. the angles picked up by a_xi."""
    n = len(s)
    return [j for j in range(n) if s[j] != s[(j + 1) % n]]


def a_coefficient(p: PolygonData, s: SignClass) -> Scalar:
    if len(s) != p.n:
        raise ValueError("sign vector length must match the polygon")
    return product(c_of(p.angles[j]) for j in sign_changes(s))


def class_frequency(p: PolygonData, s: SignClass) -> Scalar:
    total = sum((x if e > 0 else -x for x, e in zip(p.lengths, s)), ZERO)
    return abs(total)


# ---------------------------------------------------------------------------
# construction


def _sine_product(p: PolygonData) -> Scalar:
    return product(s_of(a) for a in p.angles)


def char_poly(p: PolygonData, tol: float = POLY_TOL) -> TrigPoly:
    """Characteristic polynomial; exact frequencies whenever the lengths are exact."""
    n = p.n
    if n == 0:
        return TrigPoly.build([(p.perimeter, ONE)], -ONE, tol)
    cvals = [c_of(a) for a in p.angles]
    sprod = _sine_product(p)
    if all(is_exact(x) for x in p.lengths):
        pairs = _exact_terms(p.lengths, cvals)
    else:
        f, c = _kernels.sign_class_terms(
            [float(x) for x in p.lengths], [float(v) for v in cvals], float(p.perimeter)
        )
        pairs = list(zip(f.tolist(), c.tolist()))
    return TrigPoly.build(pairs, -sprod, tol)


def _exact_terms(lengths, cvals):
    den = math.lcm(*(Fraction(x).denominator for x in lengths))
    ints = [int(Fraction(x) * den) for x in lengths]
    total = sum(ints)
    n = len(ints)
    pairs = []
    for s in enumerate_sign_classes(n):
        neg = sum(v for v, e in zip(ints, s) if e < 0)
        changes = sign_changes(s)
        coef = product(cvals[j] for j in changes)
        if is_exact(coef) and coef == 0:
            continue
        pairs.append((Fraction(abs(total - 2 * neg), den), coef))
    return pairs


def char_poly_regular(n: int) -> TrigPoly:
    """Closed-form polynomial of the perimeter-one regular n-gon.

    Counts sign vectors by their number k of minus signs and r of minus runs;
    there are (n/r) C(k-1, r-1) C(n-k-1, r-1) cyclic strings of that shape,
    each contributing c^(2r) at frequency |n - 2k|/n.
    """
    a = make_regular(n).angles[0]
    c, s = c_of(a), s_of(a)
    pairs = [(ONE, ONE)]
    for k in range(1, n):
        for r in range(1, min(k, n - k) + 1):
            count = Fraction(n, r) * comb(k - 1, r - 1) * comb(n - k - 1, r - 1)
            # each class is counted once for xi and once for -xi
            pairs.append((Fraction(abs(n - 2 * k), n), (count / 2) * c ** (2 * r)))
    return TrigPoly.build(pairs, -(s ** n))


# ---------------------------------------------------------------------------
# admissibility


def is_admissible(p: PolygonData, tol: float = POLY_TOL) -> bool:
    """No odd angle, and no non-trivial {-1, 0, 1} combination of lengths vanishes."""
    if any(angle_class(a).kind == "odd" for a in p.angles):
        return False
    n = p.n
    if n == 0:
        return True
    exact = all(is_exact(x) for x in p.lengths)
    for eps in itertools.product((-1, 0, 1), repeat=n):
        # skip the zero vector and half of the +/- pairs
        nz = next((e for e in eps if e), 0)
        if nz <= 0:
            continue
        v = sum((x * e for x, e in zip(p.lengths, eps)), ZERO)
        if (v == 0) if exact else abs(v) <= tol:
            return False
    return True


def admissible_signature(p: PolygonData) -> bool:
    return term_count(char_poly(p)) == 2 ** (p.n - 1)


def regular_pair_count(n: int, k: int, r: int) -> int:
    """Binary cyclic strings of length n with k ones arranged in r runs."""
    if k in (0, n):
        return 1 if r == 0 else 0
    return n * comb(k - 1, r - 1) * comb(n - k - 1, r - 1) // r


__all__ = [
    "EPS",
    "POLY_TOL",
    "PolyComparison",
    "SignClass",
    "TrigPoly",
    "a_coefficient",
    "admissible_signature",
    "char_poly",
    "char_poly_regular",
    "class_frequency",
    "cos_poly",
    "enumerate_sign_classes",
    "is_admissible",
    "poly_compare",
    "poly_equal",
    "regular_pair_count",
    "sign_changes",
    "term_count",
]
