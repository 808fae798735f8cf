"""Brute-force reference computations, independent of the package's closed forms.

Everything here works from point evaluation of the step function and generic
quadrature or dense sampling, so it shares no code path with the exact
per-piece formulas under test.
"""

import numpy as np
from scipy import integrate

_FINE = 200_001


def values_on(f, n: int = _FINE):
    """Midpoint samples of ``f`` on a uniform grid of ``n`` cells."""
    t = (np.arange(n) + 0.5) / n
    return t, np.asarray(f(t), dtype=float)


def rearranged_samples(f, n: int = _FINE):
    """``f*`` at cell midpoints by sorting uniform samples."""
    t, v = values_on(f, n)
    return t, np.sort(v)[::-1]


def quad(fn, a: float, b: float, points=None) -> float:
    val, _ = integrate.quad(fn, a, b, points=points, limit=500, epsabs=1e-13, epsrel=1e-12)
    return val


def step_integral(f, a: float, b: float) -> float:
    pts = [x for x in f.breakpoints if a < x < b]
    return quad(lambda s: float(f(s)), a, b, points=pts or None)


def dense_sup(fn, a: float, b: float, n: int = 200_001) -> float:
    x = np.linspace(a, b, n)
    return float(np.max(fn(x)))
