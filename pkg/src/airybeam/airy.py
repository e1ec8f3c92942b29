"""Airy function Ai and its first derivative for real arguments.

Power series about the origin (extended precision, compensated sums) for
|x| <= SERIES_LIMIT, standard asymptotic expansions outside.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.optimize import brentq

from .exceptions import InvalidInputError

SERIES_LIMIT = 8.0

# Ai(0) = 3^(-2/3)/Gamma(2/3), -Ai'(0) = 3^(-1/3)/Gamma(1/3)
_C1 = np.longdouble("0.355028053887817239260063186004183176")
_C2 = np.longdouble("0.258819403792806798405183560189203963")
_MAX_TERMS = 200


def _neumaier(terms_iter, shape):
    s = np.zeros(shape, dtype=np.longdouble)
    comp = np.zeros(shape, dtype=np.longdouble)
    for t in terms_iter:
        tmp = s + t
        big = np.abs(s) >= np.abs(t)
        comp += np.where(big, (s - tmp) + t, (t - tmp) + s)
        s = tmp
    return s + comp


def _series_terms(x3, first, ratio):
    """Yield first, first*r(1)*x^3, ... until the terms are negligible."""
    term = first
    yield term
    for k in range(1, _MAX_TERMS):
        term = term * x3 / ratio(k)
        yield term
        if np.all(np.abs(term) < np.longdouble(1e-24)):
            return


def _series_ai(x):
    x = x.astype(np.longdouble)
    x3 = x ** 3
    f = _neumaier(_series_terms(x3, np.ones_like(x), lambda k: (3 * k - 1) * (3 * k)), x.shape)
    g = _neumaier(_series_terms(x3, x.copy(), lambda k: (3 * k) * (3 * k + 1)), x.shape)
    return _C1 * f - _C2 * g


def _series_ai_prime(x):
    x = x.astype(np.longdouble)
    x3 = x ** 3
    # f'(x) = x^2/2 + ..., ratio x^3/((3k-1)(3k-3)) for k >= 2
    fp = _neumaier(_series_terms(x3, x * x / 2, lambda k: (3 * k + 2) * (3 * k)), x.shape)
    gp = _neumaier(_series_terms(x3, np.ones_like(x), lambda k: (3 * k - 2) * (3 * k)), x.shape)
    return _C1 * fp - _C2 * gp


def _u_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return np.array(u)


_U = _u_coefficients(40)
_V = np.array([1.0] + [-(6 * k + 1) / (6 * k - 1) * _U[k] for k in range(1, 40)])


def _asym_sum(coef, zeta, start, step, alternate):
    """Sum coef[start::step] * (+-1)^j / zeta^index, truncated at the smallest term."""
    total = np.zeros_like(zeta)
    prev = np.full_like(zeta, np.inf)
    active = np.ones(zeta.shape, dtype=bool)
    for j, idx in enumerate(range(start, len(coef), step)):
        term = coef[idx] * zeta ** -float(idx)
        if alternate and j % 2:
            term = -term
        mag = np.abs(term)
        active &= mag < prev
        total = np.where(active, total + term, total)
        prev = mag
        if not active.any():
            break
    return total


def _asym_ai_pos(x):
    zeta = 2.0 / 3.0 * x ** 1.5
    s = _asym_sum(_U, zeta, 0, 1, True)
    return np.exp(-zeta) / (2 * math.sqrt(math.pi) * x ** 0.25) * s


def _asym_ai_neg(x):
    t = -x
    zeta = 2.0 / 3.0 * t ** 1.5
    even = _asym_sum(_U, zeta, 0, 2, True)
    odd = _asym_sum(_U, zeta, 1, 2, True)
    ph = zeta - math.pi / 4
    return (np.cos(ph) * even + np.sin(ph) * odd) / (math.sqrt(math.pi) * t ** 0.25)


def _asym_aip_pos(x):
    zeta = 2.0 / 3.0 * x ** 1.5
    s = _asym_sum(_V, zeta, 0, 1, True)
    return -x ** 0.25 * np.exp(-zeta) / (2 * math.sqrt(math.pi)) * s


def _asym_aip_neg(x):
    t = -x
    zeta = 2.0 / 3.0 * t ** 1.5
    even = _asym_sum(_V, zeta, 0, 2, True)
    odd = _asym_sum(_V, zeta, 1, 2, True)
    ph = zeta - math.pi / 4
    return t ** 0.25 / math.sqrt(math.pi) * (np.sin(ph) * even - np.cos(ph) * odd)


def _evaluate(x, series, pos, neg, limit):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Airy argument must be finite")
    flat = arr.ravel()
    out = np.empty_like(flat)
    small = np.abs(flat) <= limit
    hi = flat > limit
    lo = flat < -limit
    if small.any():
        out[small] = series(flat[small]).astype(float)
    if hi.any():
        out[hi] = pos(flat[hi])
    if lo.any():
        out[lo] = neg(flat[lo])
    out = out.reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def airy_ai(x):
    """Ai(x) for finite real x (scalar or array)."""
    return _evaluate(x, _series_ai, _asym_ai_pos, _asym_ai_neg, SERIES_LIMIT)


def airy_ai_prime(x):
    """Ai'(x) for finite real x."""
    return _evaluate(x, _series_ai_prime, _asym_aip_pos, _asym_aip_neg, SERIES_LIMIT)


def airy_ai_series(x):
    """Series branch only (exposed for overlap checks)."""
    return _series_ai(np.atleast_1d(np.asarray(x, dtype=float))).astype(float)


def airy_ai_asymptotic(x):
    """Asymptotic branch only; requires x != 0."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    pos = x > 0
    out[pos] = _asym_ai_pos(x[pos])
    out[~pos] = _asym_ai_neg(x[~pos])
    return out


@dataclass(frozen=True)
class AiryConstants:
    mu0: float
    mu1: float
    ai_max: float


# seeds at the commonly quoted precision; refined below
_MU0_SEED = -1.01879
_MU1_SEED = -2.338


@lru_cache(maxsize=None)
def airy_constants():
    """Maximum location mu0, first zero mu1 and Ai(mu0), refined by root finding."""
    mu0 = brentq(airy_ai_prime, _MU0_SEED - 0.1, _MU0_SEED + 0.1, xtol=1e-15, rtol=1e-15)
    mu1 = brentq(airy_ai, _MU1_SEED - 0.1, _MU1_SEED + 0.1, xtol=1e-15, rtol=1e-15)
    return AiryConstants(mu0=mu0, mu1=mu1, ai_max=airy_ai(mu0))
