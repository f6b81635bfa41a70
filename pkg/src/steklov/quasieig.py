"""Real roots of a characteristic polynomial on ``[0, T]``.

Sign changes are bracketed on a uniform grid and bisected.  Roots where the
polynomial only touches zero (``cos t - 1`` has nothing but those) show up
as local minima of ``|P|``; they are refined on the derivative whose root is
best conditioned, so a fourfold root is still located to ~1e-12.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import bisect

from .charpoly import TrigPoly
from .errors import HorizonMismatch, ResolutionError

REFINE_TOL = 1e-12
TANGENT_TOL = 1e-8
DEDUPE_TOL = 1e-9
MAX_DERIV = 6


@dataclass(frozen=True)
class QuasiSpectrum:
    roots: tuple
    tangential: tuple
    T: float
    step: float
    tol: float = REFINE_TOL

    def __len__(self):
        return len(self.roots)


class SpectrumComparison(NamedTuple):
    max_gap: float
    count_diff: int
    compared: int


def default_step(P: TrigPoly) -> float:
    f = P.f_max
    return math.pi / (8 * f) if f > 0 else 1.0


def _deriv_fn(P: TrigPoly, d: int):
    """``t -> P^(d)(t)`` for d >= 0, vectorized."""
    f = np.array([float(x) for x in P.freqs])
    c = np.array([float(x) for x in P.coefs])
    k = d % 4
    # d/dt cos(ft) cycles through -f sin, -f^2 cos, f^3 sin, f^4 cos
    sign = (1.0, -1.0, -1.0, 1.0)[k]
    trig = np.cos if k in (0, 2) else np.sin
    w = sign * c * f ** d
    const = float(P.const) if d == 0 else 0.0

    def fn(t):
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        return const + (w[None, :] * trig(np.outer(t, f))).sum(axis=1)

    scale = float(np.abs(w).sum()) + abs(const)
    return fn, scale


def _bisect(fn, a: float, b: float, tol: float) -> float:
    return bisect(lambda x: float(fn(x)[0]), a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)


def _refine(P: TrigPoly, a: float, b: float, start: int, tol: float) -> Optional[float]:
    """Best-conditioned root of P^(d), d >= start, bracketed by [a, b].

    Conditioning of a root of P^(d) is judged by |P^(d+1)| there relative
    to the size of that derivative's coefficients.
    """
    best, best_score = None, -1.0
    for d in range(start, MAX_DERIV + 1):
        fn, _ = _deriv_fn(P, d)
        fa, fb = float(fn(a)[0]), float(fn(b)[0])
        if fa == 0.0:
            r = a
        elif fb == 0.0:
            r = b
        elif fa * fb < 0:
            r = _bisect(fn, a, b, tol)
        else:
            continue
        gn, gscale = _deriv_fn(P, d + 1)
        score = abs(float(gn(r)[0])) / gscale if gscale > 0 else 0.0
        if score > best_score:
            best, best_score = r, score
        if score > 1e-3:
            break
    return best


def roots(P: TrigPoly, T: float, step: Optional[float] = None, tol: float = REFINE_TOL) -> QuasiSpectrum:
    if not T > 0:
        raise ValueError("horizon T must be positive")
    fmax = P.f_max
    if step is None:
        step = default_step(P)
    if not step > 0:
        raise ValueError("step must be positive")
    if fmax > 0 and step > math.pi / (2 * fmax):
        raise ResolutionError(f"step {step} exceeds pi/(2 f_max) = {math.pi / (2 * fmax)}")
    n = int(math.ceil(T / step))
    ts = np.linspace(0.0, n * step, n + 1)
    ts = ts[ts <= T + 1e-15]
    if ts[-1] < T:
        ts = np.append(ts, T)
    vals = np.asarray(P(ts), dtype=np.float64)
    _, scale = _deriv_fn(P, 0)
    noise = 1e-13 * max(scale, 1.0)
    vals = np.where(np.abs(vals) <= noise, 0.0, vals)
    found: list[tuple[float, bool]] = []
    m = len(ts)
    # sign changes between grid points
    for i in range(m - 1):
        if vals[i] * vals[i + 1] < 0:
            r = _refine(P, ts[i], ts[i + 1], 0, tol)
            if r is not None:
                found.append((r, False))
    # touching roots: local minima of |P| (including exact grid zeros)
    av = np.abs(vals)
    for i in range(m):
        left = av[i - 1] if i > 0 else av[1] if m > 1 else math.inf
        right = av[i + 1] if i < m - 1 else math.inf
        if not (av[i] <= left and av[i] <= right):
            continue
        lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, m - 1)]
        if i == 0:
            # P is even, so t = 0 is always a critical point
            r = 0.0
        elif i == m - 1:
            continue
        else:
            vl, vr = vals[i - 1], vals[i + 1]
            if vl * vr < 0:
                if vals[i] == 0.0:
                    # a crossing that landed on the grid
                    r = _refine(P, lo, hi, 0, tol)
                    if r is not None:
                        found.append((r, False))
                continue
            r = _refine(P, lo, hi, 1, tol)
            if r is None:
                continue
        if abs(P(r)) < TANGENT_TOL:
            found.append((r, True))
    found.sort()
    out: list[tuple[float, bool]] = []
    for r, tang in found:
        if out and abs(r - out[-1][0]) <= DEDUPE_TOL:
            continue
        out.append((r, tang))
    return QuasiSpectrum(tuple(r for r, _ in out), tuple(t for _, t in out), float(T), float(step), tol)


def compare_spectra(a: QuasiSpectrum, b: QuasiSpectrum) -> SpectrumComparison:
    if abs(a.T - b.T) > 1e-12:
        raise HorizonMismatch(f"horizons differ: {a.T} vs {b.T}")
    k = min(len(a.roots), len(b.roots))
    gap = max((abs(x - y) for x, y in zip(a.roots[:k], b.roots[:k])), default=0.0)
    return SpectrumComparison(gap, len(a.roots) - len(b.roots), k)


__all__ = ["QuasiSpectrum", "SpectrumComparison", "compare_spectra", "default_step", "roots"]
