"""Float hot loops, compiled with numba when available.

Every kernel has a pure-numpy twin.  ``STEKLOV_DISABLE_NUMBA=1`` (or a
missing numba install) routes the public names to the numpy versions; the
``*_numba`` / ``*_numpy`` names stay importable so both can be benchmarked
side by side.
"""
from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly by the import
    import numba as _nb
except ImportError:  # pragma: no cover
    _nb = None

USE_NUMBA = _nb is not None and os.environ.get("STEKLOV_DISABLE_NUMBA", "") not in ("1", "true", "yes")


# ---------------------------------------------------------------------------
# trigonometric polynomial evaluation


def eval_trig_numpy(freqs, coefs, const, ts):
    ts = np.asarray(ts, dtype=np.float64)
    out = np.full(ts.shape, const, dtype=np.float64)
    for f, a in zip(freqs, coefs):
        out += a * np.cos(f * ts)
    return out


def deriv_trig_numpy(freqs, coefs, ts):
    ts = np.asarray(ts, dtype=np.float64)
    out = np.zeros(ts.shape, dtype=np.float64)
    for f, a in zip(freqs, coefs):
        out -= a * f * np.sin(f * ts)
    return out


def _eval_trig_loop(freqs, coefs, const, ts):
    out = np.empty(ts.shape[0], dtype=np.float64)
    for i in range(ts.shape[0]):
        acc = const
        t = ts[i]
        for j in range(freqs.shape[0]):
            acc += coefs[j] * np.cos(freqs[j] * t)
        out[i] = acc
    return out


def _deriv_trig_loop(freqs, coefs, ts):
    out = np.empty(ts.shape[0], dtype=np.float64)
    for i in range(ts.shape[0]):
        acc = 0.0
        t = ts[i]
        for j in range(freqs.shape[0]):
            acc -= coefs[j] * freqs[j] * np.sin(freqs[j] * t)
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# sign-class enumeration for float polygon data
#
# Class b (0 <= b < 2**(n-1)) has xi_1 = +1 and binary counting on the rest
# with xi_n as the least significant bit, matching
# charpoly.enumerate_sign_classes.


def sign_class_terms_numpy(lengths, cvals, perimeter):
    lengths = np.asarray(lengths, dtype=np.float64)
    cvals = np.asarray(cvals, dtype=np.float64)
    n = lengths.shape[0]
    b = np.arange(1 << (n - 1), dtype=np.int64)
    bits = (b[:, None] >> np.arange(n - 2, -1, -1)[None, :]) & 1
    minus = np.concatenate([np.zeros((b.size, 1), dtype=bool), bits.astype(bool)], axis=1)
    freqs = np.abs(perimeter - 2.0 * (minus * lengths[None, :]).sum(axis=1))
    change = minus != np.roll(minus, -1, axis=1)
    coefs = np.where(change, cvals[None, :], 1.0).prod(axis=1)
    return freqs, coefs


def _sign_class_terms_loop(lengths, cvals, perimeter):
    n = lengths.shape[0]
    m = 1 << (n - 1)
    freqs = np.empty(m, dtype=np.float64)
    coefs = np.empty(m, dtype=np.float64)
    for b in range(m):
        neg = 0.0
        coef = 1.0
        for j in range(n):
            mj = j > 0 and (b >> (n - 1 - j)) & 1
            k = (j + 1) % n
            mk = k > 0 and (b >> (n - 1 - k)) & 1
            if mj:
                neg += lengths[j]
            if mj != mk:
                coef *= cvals[j]
        freqs[b] = abs(perimeter - 2.0 * neg)
        coefs[b] = coef
    return freqs, coefs


# ---------------------------------------------------------------------------
# closure residual over a grid of (l1, l3) for quadrilaterals with
# l2 = half - l1 and l4 = half - l3


def closure_grid_numpy(l1, l3, dirs, half):
    l1 = np.asarray(l1, dtype=np.float64)
    l3 = np.asarray(l3, dtype=np.float64)
    d = np.asarray(dirs, dtype=np.float64)
    x = l1 * d[0, 0] + (half - l1) * d[1, 0] + l3 * d[2, 0] + (half - l3) * d[3, 0]
    y = l1 * d[0, 1] + (half - l1) * d[1, 1] + l3 * d[2, 1] + (half - l3) * d[3, 1]
    return np.hypot(x, y)


def _closure_grid_loop(l1, l3, dirs, half):
    out = np.empty(l1.shape[0], dtype=np.float64)
    for i in range(l1.shape[0]):
        a = l1[i]
        c = l3[i]
        x = a * dirs[0, 0] + (half - a) * dirs[1, 0] + c * dirs[2, 0] + (half - c) * dirs[3, 0]
        y = a * dirs[0, 1] + (half - a) * dirs[1, 1] + c * dirs[2, 1] + (half - c) * dirs[3, 1]
        out[i] = np.sqrt(x * x + y * y)
    return out


if _nb is not None:
    _jit = _nb.njit(cache=True)
    eval_trig_numba = _jit(_eval_trig_loop)
    deriv_trig_numba = _jit(_deriv_trig_loop)
    sign_class_terms_numba = _jit(_sign_class_terms_loop)
    closure_grid_numba = _jit(_closure_grid_loop)
else:  # pragma: no cover
    eval_trig_numba = deriv_trig_numba = sign_class_terms_numba = closure_grid_numba = None


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def eval_trig(freqs, coefs, const, ts):
    if USE_NUMBA:
        return eval_trig_numba(_f64(freqs), _f64(coefs), float(const), _f64(np.atleast_1d(ts)))
    return eval_trig_numpy(freqs, coefs, const, np.atleast_1d(ts))


def deriv_trig(freqs, coefs, ts):
    if USE_NUMBA:
        return deriv_trig_numba(_f64(freqs), _f64(coefs), _f64(np.atleast_1d(ts)))
    return deriv_trig_numpy(freqs, coefs, np.atleast_1d(ts))


def sign_class_terms(lengths, cvals, perimeter):
    if USE_NUMBA:
        return sign_class_terms_numba(_f64(lengths), _f64(cvals), float(perimeter))
    return sign_class_terms_numpy(lengths, cvals, float(perimeter))


def closure_grid(l1, l3, dirs, half=0.5):
    if USE_NUMBA:
        return closure_grid_numba(_f64(l1), _f64(l3), _f64(dirs), float(half))
    return closure_grid_numpy(l1, l3, dirs, half)
