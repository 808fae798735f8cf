"""Supremum and integral operators attached to a profile ``I``.

On step functions every operator here is evaluated piece by piece from closed
forms: the running suprema in ``S_I`` and ``T_I`` are attained at piece
endpoints because ``I`` and ``s/I(s)`` are monotone, and the integral operators
reduce to differences of the profile's primitives.  ``G_I`` has no such
structure and is maximised numerically on each piece.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

from rispace import _quad
from rispace.evalfunction import (
    NO_MONOTONICITY,
    NONINCREASING,
    EvalFunction,
    GridFunction,
    discretize,
    piece_samples,
)
from rispace.profiles import Profile, ProfileError
from rispace.stepfunction import StepFunction, rearrange

__all__ = [
    "OPERATORS",
    "apply",
    "apply_SI",
    "apply_TI",
    "apply_HI",
    "apply_RI",
    "apply_GI",
    "apply_H_aux",
    "apply_Rprime",
    "iterate_HI_on_grid",
    "integrate_eval",
    "integral_TI",
    "maximal_of_eval",
]

_SAMPLES = 65


def _as_rearranged(f):
    if isinstance(f, StepFunction):
        return rearrange(f)
    if f.monotonicity == NONINCREASING:
        return f
    return rearrange(discretize(f))


def _prefix(vals: np.ndarray) -> np.ndarray:
    """``out[k] = max(vals[:k])`` with ``out[0] = 0``."""
    return np.concatenate(([0.0], np.maximum.accumulate(vals)[:-1])) if vals.size else vals


def _suffix(vals: np.ndarray) -> np.ndarray:
    """``out[k] = max(vals[k:])``."""
    return np.maximum.accumulate(vals[::-1])[::-1]


# ---------------------------------------------------------------------------
# S_I
# ---------------------------------------------------------------------------


def apply_SI(I: Profile, f) -> EvalFunction:
    """``(S_I f)(t) = sup_{s <= t} I(s) f*(s) / I(t)``."""
    fs = _as_rearranged(f)
    if isinstance(fs, EvalFunction):
        return _sup_left_eval(I, fs)
    e, v = fs.edges, fs.values
    # sup over the closed piece k of I(s) f*(s) is v_k I(e_{k+1})
    mprev = _prefix(v * I(e[1:]))

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            carried = np.where(mprev[k] > 0, mprev[k] / I(t), 0.0)
        return np.maximum(carried, v[k])

    return EvalFunction(e, piece, NONINCREASING, f"S[{I.spec()}]", float(v[0]), np.full(v.size, -1.0))


def _sup_left_eval(I: Profile, g: EvalFunction) -> EvalFunction:
    s, vals, _ = piece_samples(g, _SAMPLES, use_trend=False)
    w = I(s) * vals
    w[0] = 0.0 if s[0] <= 0 else w[0]
    run = np.maximum.accumulate(w)

    def piece(t, k):
        j = np.searchsorted(s, t, side="right") - 1
        best = np.where(j >= 0, run[np.maximum(j, 0)], 0.0)
        here = g.piece(t, k)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.maximum(best / I(t), here)

    return EvalFunction(g.edges, piece, NONINCREASING, f"S[{I.spec()}]({g.provenance})", g.zero_limit)


# ---------------------------------------------------------------------------
# T_I
# ---------------------------------------------------------------------------


def _require_quasiconcave_up_to(I: Profile, end: float) -> None:
    """``s/I(s)`` must be nondecreasing on ``(0, end]``."""
    if end <= 0:
        return
    s = np.concatenate((np.geomspace(1e-300, end, 2000), [end]))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = s / I(s)
    ok = np.isfinite(r)
    s, r = s[ok], r[ok]
    bad = np.diff(r) < -1e-12 * np.abs(r[1:])
    if np.any(bad):
        w = float(s[1:][np.argmax(bad)])
        raise ProfileError(
            f"T_I needs s/I(s) nondecreasing on the support of f; {I.spec()} fails near s = {w:.6g}"
        )


def apply_TI(I: Profile, f) -> EvalFunction:
    """``(T_I f)(t) = (I(t)/t) sup_{t <= s < 1} (s/I(s)) f*(s)``.

    Exact when ``s/I(s)`` is nondecreasing on the support of ``f*``, which is
    checked; profiles that are quasiconcave only there are accepted.
    """
    fs = _as_rearranged(f)
    if isinstance(fs, EvalFunction):
        return _sup_right_eval(I, fs)
    e, v = fs.edges, fs.values
    positive = np.nonzero(v > 0)[0]
    support = float(e[positive[-1] + 1]) if positive.size else 0.0
    _require_quasiconcave_up_to(I, support)
    right = e[1:]
    q = _suffix(v * right / I(right))

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(q[k] > 0, I(t) / t * q[k], 0.0)

    zl = I.ratio_at_zero() * q[0] if q[0] > 0 else 0.0
    return EvalFunction(e, piece, NONINCREASING, f"T[{I.spec()}]", zl, np.full(v.size, -1.0))


def _sup_right_eval(I: Profile, g: EvalFunction) -> EvalFunction:
    s, vals, _ = piece_samples(g, _SAMPLES, use_trend=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(s > 0, s / I(np.maximum(s, 1e-300)), 0.0) * vals
    w = np.nan_to_num(w, nan=0.0)
    # s < 1 strictly, so the sample at 1 only enters as a limit, which is fine
    run = _suffix(w)

    def piece(t, k):
        j = np.searchsorted(s, t, side="left")
        best = np.where(j < s.size, run[np.minimum(j, s.size - 1)], 0.0)
        here = t / I(t) * g.piece(t, k)
        with np.errstate(divide="ignore", invalid="ignore"):
            return I(t) / t * np.maximum(best, here)

    return EvalFunction(g.edges, piece, NONINCREASING, f"T[{I.spec()}]({g.provenance})")


# ---------------------------------------------------------------------------
# integral operators
# ---------------------------------------------------------------------------


def apply_HI(I: Profile, f: StepFunction, m: int = 1) -> EvalFunction:
    """``(H_I^m f)(t)``, the ``m``-fold composition of ``t -> int_t^1 f/I``.

    With ``T(x) = int_x^1 ds/I(s)`` the composition has the kernel form
    ``(1/m!) sum_k v_k [(T(t) - T(b_k))^m - (T(t) - T(max(t, a_k)))^m]``.
    """
    if int(m) != m or m < 1:
        raise ValueError("order m must be an integer >= 1")
    m = int(m)
    e, v = f.edges, f.values
    te = np.asarray(I.int_recip_I_tail(e[1:]), dtype=float)
    te = np.append(np.inf, te)  # T(0) is handled through zero_limit

    def piece(t, k):
        tt = np.asarray(I.int_recip_I_tail(t), dtype=float)
        # pieces j >= k contribute; the partial piece k starts at t
        diff_next = np.maximum(tt[:, None] - te[None, 1:], 0.0)  # T(t) - T(b_j)
        lo = np.maximum(tt[:, None] - te[None, :-1], 0.0)  # T(t) - T(a_j)
        j = np.arange(v.size)[None, :]
        lo = np.where(j <= k[:, None], 0.0, lo)
        active = j >= k[:, None]
        terms = np.where(active, v[None, :] * (diff_next**m - lo**m), 0.0)
        return terms.sum(axis=1) / math.factorial(m)

    def piece_small(t, k):
        # one row of pieces at a time keeps memory bounded for long inputs
        out = np.empty(t.shape)
        for start in range(0, t.size, 512):
            sl = slice(start, start + 512)
            out[sl] = piece(t[sl], k[sl])
        return out

    zl = None
    if v[0] > 0 and not np.isfinite(float(I.int_recip_I(e[1]))):
        zl = math.inf
    elif np.all(np.isfinite(te[1:])):
        t0 = float(I.int_recip_I(1.0))  # T(0)
        lo = np.maximum(t0 - np.append(t0, te[1:-1]), 0.0)
        zl = float(np.sum(v * ((t0 - te[1:]) ** m - lo**m))) / math.factorial(m)
    return EvalFunction(e, piece_small, NONINCREASING, f"H^{m}[{I.spec()}]", zl, np.full(v.size, -1.0))


def iterate_HI_on_grid(I: Profile, f: StepFunction, m: int, grid: np.ndarray) -> GridFunction:
    """Reference composition of ``H_I`` on a grid (trapezoid in ``log t``).

    Used to cross-check :func:`apply_HI`; accuracy is second order in the
    grid's log spacing.
    """
    grid = np.unique(np.concatenate((np.asarray(grid, dtype=float), f.edges[1:])))
    du = np.diff(np.log(grid))
    w = grid / I(grid)  # ds = s d(log s)
    # f is constant on every cell because the grid contains its breakpoints
    cells = f(np.sqrt(grid[1:] * grid[:-1])) * 0.5 * (w[1:] + w[:-1]) * du
    g = np.append(np.cumsum(cells[::-1])[::-1], 0.0)
    for _ in range(m - 1):
        integrand = g * w
        cells = 0.5 * (integrand[1:] + integrand[:-1]) * du
        g = np.append(np.cumsum(cells[::-1])[::-1], 0.0)
    return GridFunction(grid, g)


def apply_RI(I: Profile, f: StepFunction) -> EvalFunction:
    """``(R_I f)(t) = (1/I(t)) int_0^t f``."""
    e, v = f.edges, f.values
    prim = np.concatenate(([0.0], np.cumsum(v * f.lengths)))

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            return (prim[k] + v[k] * (t - e[k])) / I(t)

    zl = 0.0 if I.ratio_at_zero() == math.inf else v[0] / I.ratio_at_zero()
    return EvalFunction(e, piece, NO_MONOTONICITY, f"R[{I.spec()}]", zl)


def _golden_max(h, a: float, b: float) -> tuple[float, float]:
    res = minimize_scalar(lambda x: -h(x), bounds=(a, b), method="bounded", options={"xatol": 1e-12 * max(b, 1e-300)})
    return float(res.x), float(-res.fun)


def apply_GI(I: Profile, f: StepFunction) -> EvalFunction:
    """``(G_I f)(t) = sup_{t <= s < 1} (R_I f*)(s)``.

    The ratio is sampled on every piece of ``f*``; an interior maximum is then
    polished by bounded golden-section search and added to the samples.
    """
    fs = rearrange(f)
    r = apply_RI(I, fs)
    s, vals, ks = piece_samples(r, _SAMPLES, use_trend=False)
    extra_s, extra_v = [], []
    for k in range(fs.n_pieces):
        sel = np.nonzero(ks == k)[0]
        j = int(sel[np.argmax(vals[sel])])
        if j != sel[0] and j != sel[-1]:
            a, b = s[j - 1], s[j + 1]
            x, hx = _golden_max(lambda x: float(r.piece(np.array([x]), np.array([k]))[0]), a, b)
            if hx > vals[j]:
                extra_s.append(x)
                extra_v.append(hx)
    if extra_s:
        s = np.concatenate((s, extra_s))
        vals = np.concatenate((vals, extra_v))
        order = np.argsort(s, kind="stable")
        s, vals = s[order], vals[order]
    run = _suffix(vals)

    def piece(t, k):
        j = np.searchsorted(s, t, side="left")
        best = np.where(j < s.size, run[np.minimum(j, s.size - 1)], 0.0)
        return np.maximum(best, r.piece(t, k))

    return EvalFunction(fs.edges, piece, NONINCREASING, f"G[{I.spec()}]", float(run[0]))


def apply_H_aux(I: Profile, g: StepFunction) -> EvalFunction:
    """``(H g)(s) = (s/I(s)) int_s^1 (I(t)/t^2) g(t) dt``."""
    e, v = g.edges, g.values
    ue = np.asarray(I.int_I_over_s2(e[1:]), dtype=float)
    lo_full = np.append(np.nan, ue[:-1])  # U(e_k) for k >= 1
    seg = np.where(np.arange(v.size) >= 1, v * (lo_full - ue), 0.0)
    tail = np.append(np.cumsum(seg[::-1])[::-1], 0.0)  # sum over pieces j >= k

    def piece(t, k):
        ut = np.asarray(I.int_I_over_s2(t), dtype=float)
        inner = v[k] * (ut - ue[k]) + tail[k + 1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return t / I(t) * inner

    return EvalFunction(e, piece, NO_MONOTONICITY, f"Haux[{I.spec()}]")


def apply_Rprime(I: Profile, f: StepFunction) -> EvalFunction:
    """Mean of ``f*`` on ``(0, t)`` against the measure ``(s/I(s)) ds``."""
    fs = rearrange(f)
    e, v = fs.edges, fs.values
    we = np.asarray(I.int_s_over_I(e), dtype=float)
    num = np.concatenate(([0.0], np.cumsum(v * np.diff(we))))

    def piece(t, k):
        wt = np.asarray(I.int_s_over_I(t), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (num[k] + v[k] * (wt - we[k])) / wt
        return np.where(wt > 0, out, v[k])

    return EvalFunction(e, piece, NONINCREASING, f"R'[{I.spec()}]", float(v[0]))


# ---------------------------------------------------------------------------
# helpers on derived functions
# ---------------------------------------------------------------------------


def integrate_eval(g: EvalFunction, a: float = 0.0, b: float = 1.0) -> float:
    """``int_a^b g`` by log-space Gauss-Legendre on every piece."""
    total = 0.0
    for k in range(g.n_pieces):
        lo, hi = max(g.edges[k], a), min(g.edges[k + 1], b)
        if hi <= lo:
            continue
        h = lambda s, k=k: g.piece(s.ravel(), np.full(s.size, k)).reshape(s.shape)
        if lo <= 0.0:
            total += float(_quad.integrate_from_zero(h, np.array([hi]))[0])
        else:
            total += float(_quad.integrate_log(h, np.array([lo]), np.array([hi]))[0])
    return total


def integral_TI(I: Profile, f: StepFunction) -> float:
    """``int_0^1 T_I f`` in closed form: ``sum_k q_k (J(e_{k+1}) - J(e_k))`` with ``J = int_0 I(s)/s``.

    Infinite as soon as ``I(s)/s`` fails to be integrable at 0 and ``f`` is nonzero.
    """
    fs = rearrange(f)
    if fs.is_zero():
        return 0.0
    e, v = fs.edges, fs.values
    positive = np.nonzero(v > 0)[0]
    _require_quasiconcave_up_to(I, float(e[positive[-1] + 1]))
    right = e[1:]
    q = _suffix(v * right / I(right))
    J = np.asarray(I.int_I_over_s(e[1:]), dtype=float)
    if not np.all(np.isfinite(J)):
        return math.inf
    dJ = np.diff(np.concatenate(([0.0], J)))
    return float(np.sum(q * dJ))


def maximal_of_eval(g: EvalFunction) -> EvalFunction:
    """``t -> (1/t) int_0^t g`` for a nonincreasing ``g`` (numerical primitive)."""
    e = g.edges
    cum = np.concatenate(([0.0], np.cumsum([integrate_eval(g, e[k], e[k + 1]) for k in range(g.n_pieces)])))

    def piece(t, k):
        out = np.empty(t.shape)
        for i, (ti, ki) in enumerate(zip(t, k)):
            h = lambda s, kk=ki: g.piece(s.ravel(), np.full(s.size, kk)).reshape(s.shape)
            if e[ki] <= 0.0:
                part = float(_quad.integrate_from_zero(h, np.array([ti]))[0])
            else:
                part = float(_quad.integrate_log(h, np.array([e[ki]]), np.array([ti]))[0])
            out[i] = (cum[ki] + part) / ti
        return out

    return EvalFunction(e, piece, NONINCREASING, f"maximal({g.provenance})", g.zero_limit)


OPERATORS = {
    "SI": apply_SI,
    "TI": apply_TI,
    "HI": apply_HI,
    "RI": apply_RI,
    "GI": apply_GI,
    "H": apply_H_aux,
    "Rprime": apply_Rprime,
}


def apply(name: str, I: Profile, f: StepFunction, **kwargs) -> EvalFunction:
    try:
        op = OPERATORS[name]
    except KeyError:
        raise ValueError(f"unknown operator {name!r}; choose from {sorted(OPERATORS)}") from None
    return op(I, f, **kwargs)
