"""Scalars, angles and the cosine/sine factors attached to each vertex.

A *scalar* is either an exact :class:`fractions.Fraction` or a Python
``float``.  Any arithmetic mixing the two demotes to ``float``; callers
check :func:`is_exact` to learn whether a result is still exact.

Angles store only the rational multiplier of pi when exact, so a vertex of
``3*pi/5`` is ``Angle.exact(3, 5)`` and never carries a rounded pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

from .errors import DomainError

Scalar = Union[Fraction, float]

EPS = 1e-12

ZERO = Fraction(0)
ONE = Fraction(1)


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def as_scalar(x) -> Scalar:
    """Coerce ints and Fractions to Fraction, everything else to float."""
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    return float(x)


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"`` or an integer string exactly; decimals become floats."""
    s = text.strip()
    try:
        return Fraction(s) if ("/" in s or s.lstrip("+-").isdigit()) else float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a scalar: {text!r}") from exc


def format_scalar(x: Scalar) -> str:
    """Render exact values as ``"p/q"`` (or ``"p"``) and floats with 17 digits."""
    if is_exact(x):
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return format(float(x), ".17g")


def is_zero(x: Scalar, eps: float = EPS) -> bool:
    if is_exact(x):
        return x == 0
    return abs(x) < eps


def is_one(x: Scalar, eps: float = EPS) -> bool:
    if is_exact(x):
        return x == 1
    return abs(x - 1.0) < eps


def close(a: Scalar, b: Scalar, tol: float = EPS) -> bool:
    """Exact equality when both sides are exact, absolute tolerance otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    return abs(float(a) - float(b)) <= tol


def product(values) -> Scalar:
    out: Scalar = ONE
    for v in values:
        out = out * v
        if is_exact(out) and out == 0:
            return ZERO
    return out


# ---------------------------------------------------------------------------
# angles


@dataclass(frozen=True)
class Angle:
    """Interior angle in ``(0, pi)``: exact multiple of pi or float radians."""

    pi_mult: Fraction | None = None
    rad: float | None = None

    def __post_init__(self):
        if (self.pi_mult is None) == (self.rad is None):
            raise DomainError("Angle needs exactly one of pi_mult / rad")
        v = self.pi_mult if self.pi_mult is not None else self.rad / math.pi
        if not 0 < v < 1:
            raise DomainError(f"angle {self} outside (0, pi)")

    @classmethod
    def exact(cls, p, q=1) -> "Angle":
        return cls(pi_mult=Fraction(p, q))

    @classmethod
    def approx(cls, radians: float) -> "Angle":
        return cls(rad=float(radians))

    @classmethod
    def of(cls, value) -> "Angle":
        """Angle from a Fraction (multiple of pi) or a float (radians)."""
        if isinstance(value, Angle):
            return value
        if is_exact(value):
            return cls(pi_mult=Fraction(value))
        return cls(rad=float(value))

    @property
    def is_exact(self) -> bool:
        return self.pi_mult is not None

    @property
    def radians(self) -> float:
        if self.pi_mult is not None:
            return math.pi * self.pi_mult.numerator / self.pi_mult.denominator
        return self.rad

    def __float__(self):
        return self.radians

    def __repr__(self):
        if self.pi_mult is not None:
            return f"Angle({format_scalar(self.pi_mult)}*pi)"
        return f"Angle({self.rad!r} rad)"

    def theta(self) -> float:
        """``pi**2 / (2*alpha)``, the argument of c and s."""
        if self.pi_mult is not None:
            return math.pi * self.pi_mult.denominator / (2 * self.pi_mult.numerator)
        return math.pi ** 2 / (2 * self.rad)


def angle_remainder(total_pi: Fraction, angles) -> Angle:
    """The angle completing ``angles`` to ``total_pi * pi``; exact if possible."""
    angles = list(angles)
    if all(a.is_exact for a in angles):
        return Angle(pi_mult=Fraction(total_pi) - sum((a.pi_mult for a in angles), ZERO))
    return Angle(rad=math.pi * float(total_pi) - sum(a.radians for a in angles))


class AngleClass(NamedTuple):
    kind: str  # "odd" | "even" | "generic"
    index: int | None = None
    parity: int | None = None


GENERIC = AngleClass("generic")


def angle_class(a: Angle) -> AngleClass:
    """Odd angles are pi/(2k+1), even ones pi/(2m); floats are always generic."""
    if a.pi_mult is None or a.pi_mult.numerator != 1:
        return GENERIC
    q = a.pi_mult.denominator
    if q % 2:
        k = (q - 1) // 2
        return AngleClass("odd", k, -1 if k % 2 else 1)
    m = q // 2
    return AngleClass("even", m, -1 if m % 2 else 1)


def is_odd(a: Angle) -> bool:
    return angle_class(a).kind == "odd"


# cos(x pi) at the rational x (mod 2) where it is rational (Niven's theorem)
_RATIONAL_COS = {
    Fraction(0): ONE,
    Fraction(1, 3): Fraction(1, 2),
    Fraction(1, 2): ZERO,
    Fraction(2, 3): Fraction(-1, 2),
    Fraction(1): -ONE,
    Fraction(4, 3): Fraction(-1, 2),
    Fraction(3, 2): ZERO,
    Fraction(5, 3): Fraction(1, 2),
}


def _cos_pi(x: Fraction) -> Scalar:
    """cos(x pi), exact whenever the value is rational."""
    v = _RATIONAL_COS.get(x % 2)
    return v if v is not None else math.cos(math.pi * float(x % 2))


def c_of(a: Angle) -> Scalar:
    cls = angle_class(a)
    if cls.kind == "odd":
        return ZERO
    if cls.kind == "even":
        return Fraction(cls.parity)
    if a.is_exact:
        # pi^2/(2 alpha) = (q / 2p) pi for alpha = (p/q) pi
        return _cos_pi(1 / (2 * a.pi_mult))
    return math.cos(a.theta())


def s_of(a: Angle) -> Scalar:
    cls = angle_class(a)
    if cls.kind == "odd":
        return Fraction(cls.parity)
    if cls.kind == "even":
        return ZERO
    if a.is_exact:
        return _cos_pi(1 / (2 * a.pi_mult) - Fraction(1, 2))
    return math.sin(a.theta())


def snap_odd(a: Angle, tol: float = 1e-6, max_q: int = 100001) -> Angle | None:
    """Exact odd angle within relative ``tol`` of ``a``, else None."""
    if angle_class(a).kind == "odd":
        return a
    x = a.radians
    q = round(math.pi / x)
    if q < 3 or q % 2 == 0 or q > max_q:
        return None
    if abs(x - math.pi / q) <= tol * x:
        return Angle.exact(1, q)
    return None


def abs_c_inverse(s: float, m: int, snap: float = EPS) -> Angle:
    """Unique angle in ``[pi/(m+1), pi/m]`` whose ``|c|`` equals ``s``.

    Values within ``snap`` of 0 or 1 return the exact odd or even endpoint.
    """
    if m < 1 or int(m) != m:
        raise DomainError(f"m must be a positive integer, got {m!r}")
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise DomainError(f"|c| value {s!r} outside [0, 1]")
    # theta = pi^2/(2 alpha) sweeps [m pi/2, (m+1) pi/2]; |cos| is 1 at the
    # endpoint that is a multiple of pi and 0 at the other one.
    lo_q, hi_q = m, m + 1  # theta = lo_q*pi/2 .. hi_q*pi/2
    one_q = lo_q if lo_q % 2 == 0 else hi_q
    zero_q = hi_q if one_q == lo_q else lo_q
    if s >= 1.0 - snap:
        return Angle.exact(1, one_q)
    if s <= snap:
        if zero_q == 1:
            raise DomainError("|c| = 0 on (pi/2, pi) only at alpha = pi")
        return Angle.exact(1, zero_q)
    phi = math.acos(s) if m % 2 == 0 else math.asin(s)
    theta = m * math.pi / 2 + phi
    return Angle.approx(math.pi ** 2 / (2 * theta))
