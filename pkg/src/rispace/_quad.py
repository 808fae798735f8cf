"""Composite Gauss-Legendre quadrature in logarithmic coordinates.

Integrands met here behave like powers and logarithms near 0, so they are
smooth in ``u = log s``.  Panels of bounded log-width integrate them to near
machine precision without adaptive bookkeeping, and every routine is
vectorised over many integration intervals at once.
"""

from __future__ import annotations

import numpy as np

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)

LOG_PANEL = 0.25
LOG_FLOOR = -690.0  # exp(-690) is about 1e-300


def integrate_log(h, a, b, panel: float = LOG_PANEL) -> np.ndarray:
    """``int_a^b h(s) ds`` for arrays ``0 < a <= b``, computed in ``u = log s``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape)
    live = b > a
    if not np.any(live):
        return out
    ua, ub = np.log(a[live]), np.log(b[live])
    counts = np.maximum(1, np.ceil((ub - ua) / panel).astype(int))
    owner = np.repeat(np.arange(ua.size), counts)
    offset = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    width = ((ub - ua) / counts)[owner]
    left = ua[owner] + offset * width
    u = left[:, None] + 0.5 * width[:, None] * (_NODES[None, :] + 1.0)
    s = np.exp(u)
    vals = h(s) * s
    panel_sums = 0.5 * width * (vals @ _WEIGHTS)
    out[live] = np.bincount(owner, weights=panel_sums, minlength=ua.size)
    return out


def integrate_from_zero(h, t, divergence_rtol: float = 1e-9) -> np.ndarray:
    """``int_0^t h(s) ds`` for an array ``t``; ``inf`` where the tail diverges.

    The integral below the smallest ``t`` is taken down to ``exp(LOG_FLOOR)``;
    if the integrand (in log coordinates) is still non-negligible there the
    integral is declared divergent.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros(t.shape)
    pos = t > 0
    if not np.any(pos):
        return out
    tp = t[pos]
    order = np.argsort(tp)
    ts = tp[order]
    t0 = ts[0]
    floor = np.exp(LOG_FLOOR)
    tail = integrate_log(h, np.array([floor]), np.array([t0]), panel=1.0)[0]
    edge = float(h(np.array([floor]))[0] * floor)
    steps = integrate_log(h, ts[:-1], ts[1:])
    cum = tail + np.concatenate(([0.0], np.cumsum(steps)))
    if not np.isfinite(tail) or edge * 50.0 > divergence_rtol * max(abs(tail), 1e-300):
        cum[:] = np.inf
    res = np.empty_like(ts)
    res[order] = cum
    out[pos] = res
    return out


def integrate_to_one(h, t) -> np.ndarray:
    """``int_t^1 h(s) ds`` for an array ``0 < t <= 1``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    order = np.argsort(t)
    ts = t[order]
    nodes = np.append(ts, 1.0)
    steps = integrate_log(h, nodes[:-1], nodes[1:])
    rev = np.cumsum(steps[::-1])[::-1]
    out = np.empty_like(ts)
    out[order] = rev
    return out
