"""Isoperimetric profiles ``I`` on (0, 1).

Every profile is a nondecreasing map of (0, 1) onto itself, normalised so that
``I(1-) = 1``.  Besides evaluation and inversion a profile exposes the weighted
primitives that the condition checks and operators need::

    int_I_over_s(t)      = int_0^t I(s)/s ds
    int_recip_I(t)       = int_0^t ds/I(s)
    int_recip_I_tail(t)  = int_t^1 ds/I(s)
    int_I_over_s2(t)     = int_t^1 I(s)/s^2 ds
    int_I_over_s3(t)     = int_t^1 I(s)/s^3 ds
    int_s_over_I(t)      = int_0^t s/I(s) ds

Divergent integrals come back as ``inf`` rather than raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from rispace import _quad

__all__ = [
    "Profile",
    "PowerProfile",
    "PiecewisePowerProfile",
    "TabulatedProfile",
    "ProductProfile",
    "LogProfile",
    "FunctionProfile",
    "TildeProfile",
    "PhiSpec",
    "ProfileError",
    "power_profile",
    "product_profile",
    "tabulated_profile",
    "phi_power",
    "int_I_over_s",
    "int_recip_I",
    "int_I_over_s2",
    "int_I_over_s3",
]


class ProfileError(ValueError):
    """Raised when a profile violates a structural requirement."""


def _arr(t):
    return np.asarray(t, dtype=float)


def _out(x, like):
    x = np.asarray(x, dtype=float)
    return x if np.ndim(like) else float(x.reshape(-1)[0])


class Profile:
    """Base class.  Subclasses implement ``_eval``; the rest has numeric defaults."""

    name = "profile"

    def __call__(self, t):
        t = _arr(t)
        return _out(self._eval(np.atleast_1d(t)), t)

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def spec(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.spec()}>"

    # -- inversion -------------------------------------------------------------
    def inverse(self, y):
        """``I^{-1}(y)`` by vectorised bisection (absolute tolerance 1e-12)."""
        y = _arr(y)
        yy = np.atleast_1d(y)
        lo = np.zeros_like(yy)
        hi = np.ones_like(yy)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = self._eval(np.maximum(mid, 1e-300)) < yy
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo < 1e-15):
                break
        return _out(0.5 * (lo + hi), y)

    def tilde(self) -> "Profile":
        """The profile ``t / I(t)``."""
        return TildeProfile(self)

    def excess_over_square(self, t):
        """``I(t)/t^2 - 1``."""
        t = _arr(t)
        return self(t) / t**2 - 1.0

    def ratio_at_zero(self) -> float:
        """``lim_{t -> 0+} I(t)/t``."""
        t = 1e-300
        return float(self._eval(np.array([t]))[0] / t)

    # -- weighted primitives ---------------------------------------------------
    def _vec(self, fn, t):
        t = _arr(t)
        return _out(fn(np.atleast_1d(t)), t)

    def int_I_over_s(self, t):
        return self._vec(lambda x: _quad.integrate_from_zero(lambda s: self._eval(s) / s, x), t)

    def int_recip_I(self, t):
        return self._vec(lambda x: _quad.integrate_from_zero(lambda s: 1.0 / self._eval(s), x), t)

    def int_recip_I_tail(self, t):
        return self._vec(lambda x: _quad.integrate_to_one(lambda s: 1.0 / self._eval(s), x), t)

    def int_I_over_s2(self, t):
        return self._vec(lambda x: _quad.integrate_to_one(lambda s: self._eval(s) / s / s, x), t)

    def int_I_over_s3(self, t):
        return self._vec(lambda x: _quad.integrate_to_one(lambda s: self._eval(s) / s / s / s, x), t)

    def int_s_over_I(self, t):
        return self._vec(lambda x: _quad.integrate_from_zero(lambda s: s / self._eval(s), x), t)


# ---------------------------------------------------------------------------
# piecewise power profiles: closed forms everywhere
# ---------------------------------------------------------------------------


def _pow_integral(c, p, a, b):
    """``int_a^b c s^p ds`` elementwise, with ``inf`` for divergence at ``a = 0``."""
    c, p, a, b = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (c, p, a, b)))
    out = np.zeros(a.shape)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        is_log = np.abs(p + 1.0) < 1e-14
        zero_a = a <= 0.0
        lg = c * (np.log(b) - np.log(np.where(zero_a, 1.0, a)))
        lg = np.where(zero_a, np.inf, lg)
        q = p + 1.0
        # b^q - a^q written via expm1 so that a close to b keeps its digits
        qq = np.where(is_log, 1.0, q)
        pw = c * b**q * -np.expm1(qq * np.log(a / b)) / qq
        pw = np.where(zero_a & (q < 0), np.inf, pw)
        out = np.where(is_log, lg, pw)
    out = np.where(b <= a, 0.0, out)
    return out


class PiecewisePowerProfile(Profile):
    """``I(t) = c_j t^{e_j}`` on ``[k_j, k_{j+1}]`` with ``k_0 = 0`` and ``k_J = 1``."""

    def __init__(self, knots, coefs, exponents, name: str = "piecewise-power"):
        self.knots = np.asarray(knots, dtype=float)
        self.coefs = np.asarray(coefs, dtype=float)
        self.exps = np.asarray(exponents, dtype=float)
        if self.knots[0] != 0.0 or self.knots[-1] != 1.0:
            raise ProfileError("knots must start at 0 and end at 1")
        if self.coefs.size != self.knots.size - 1 or self.exps.size != self.coefs.size:
            raise ProfileError("need one coefficient and exponent per segment")
        self.name = name

    def _seg(self, t):
        return np.clip(np.searchsorted(self.knots, t, side="right") - 1, 0, self.coefs.size - 1)

    def _eval(self, t):
        j = self._seg(t)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return self.coefs[j] * np.power(t, self.exps[j])

    def inverse(self, y):
        y = _arr(y)
        yy = np.atleast_1d(y)
        knot_vals = np.concatenate(
            ([0.0], self.coefs * np.power(self.knots[1:], self.exps))
        )
        j = np.clip(np.searchsorted(knot_vals, yy, side="left") - 1, 0, self.coefs.size - 1)
        with np.errstate(divide="ignore"):
            res = np.power(yy / self.coefs[j], 1.0 / self.exps[j])
        return _out(res, y)

    def ratio_at_zero(self) -> float:
        e0 = self.exps[0]
        if e0 < 1.0:
            return math.inf
        return float(self.coefs[0]) if e0 == 1.0 else 0.0

    def _from_zero(self, k: float, t):
        """``int_0^t I(s) s^k ds``."""
        t = np.atleast_1d(_arr(t))
        lo, hi = self.knots[:-1], self.knots[1:]
        seg_tot = _pow_integral(self.coefs, self.exps + k, lo, hi)
        cum = np.concatenate(([0.0], np.cumsum(seg_tot)))
        j = self._seg(t)
        part = _pow_integral(self.coefs[j], self.exps[j] + k, lo[j], t)
        with np.errstate(invalid="ignore"):
            res = cum[j] + part
        return np.where(t <= 0, 0.0, res)

    def _to_one(self, k: float, t):
        """``int_t^1 I(s) s^k ds``."""
        t = np.atleast_1d(_arr(t))
        lo, hi = self.knots[:-1], self.knots[1:]
        seg_tot = _pow_integral(self.coefs, self.exps + k, lo, hi)
        rcum = np.concatenate((np.cumsum(seg_tot[::-1])[::-1], [0.0]))
        j = self._seg(t)
        part = _pow_integral(self.coefs[j], self.exps[j] + k, t, hi[j])
        return rcum[j + 1] + part

    def _recip_from_zero(self, k, t):
        # int_0^t s^k / I(s) ds
        t = np.atleast_1d(_arr(t))
        lo, hi = self.knots[:-1], self.knots[1:]
        seg_tot = _pow_integral(1.0 / self.coefs, k - self.exps, lo, hi)
        cum = np.concatenate(([0.0], np.cumsum(seg_tot)))
        j = self._seg(t)
        part = _pow_integral(1.0 / self.coefs[j], k - self.exps[j], lo[j], t)
        with np.errstate(invalid="ignore"):
            res = cum[j] + part
        return np.where(t <= 0, 0.0, res)

    def _recip_to_one(self, k, t):
        t = np.atleast_1d(_arr(t))
        lo, hi = self.knots[:-1], self.knots[1:]
        seg_tot = _pow_integral(1.0 / self.coefs, k - self.exps, lo, hi)
        rcum = np.concatenate((np.cumsum(seg_tot[::-1])[::-1], [0.0]))
        j = self._seg(t)
        part = _pow_integral(1.0 / self.coefs[j], k - self.exps[j], t, hi[j])
        return rcum[j + 1] + part

    def int_I_over_s(self, t):
        return self._vec(lambda x: self._from_zero(-1.0, x), t)

    def int_recip_I(self, t):
        return self._vec(lambda x: self._recip_from_zero(0.0, x), t)

    def int_recip_I_tail(self, t):
        return self._vec(lambda x: self._recip_to_one(0.0, x), t)

    def int_I_over_s2(self, t):
        return self._vec(lambda x: self._to_one(-2.0, x), t)

    def int_I_over_s3(self, t):
        return self._vec(lambda x: self._to_one(-3.0, x), t)

    def int_s_over_I(self, t):
        return self._vec(lambda x: self._recip_from_zero(1.0, x), t)


class PowerProfile(PiecewisePowerProfile):
    """``I(t) = t^alpha``."""

    def __init__(self, alpha: float):
        alpha = float(alpha)
        if not 0.0 <= alpha <= 1.0:
            raise ProfileError(f"power exponent must lie in [0, 1], got {alpha}")
        super().__init__([0.0, 1.0], [1.0], [alpha], name=f"power({alpha!r})")
        self.alpha = alpha

    def inverse(self, y):
        y = _arr(y)
        return np.power(y, 1.0 / self.alpha) if y.ndim else float(y ** (1.0 / self.alpha))

    def excess_over_square(self, t):
        t = _arr(t)
        return np.expm1((self.alpha - 2.0) * np.log(t))

    def tilde(self) -> "PowerProfile":
        return PowerProfile(1.0 - self.alpha)

    def spec(self) -> str:
        return f"power({self.alpha!r})"


def power_profile(alpha: float) -> PowerProfile:
    """The profile ``t^alpha`` for ``0 < alpha <= 1``."""
    if not 0.0 < alpha <= 1.0:
        raise ProfileError(f"power exponent must lie in (0, 1], got {alpha}")
    return PowerProfile(alpha)


class TabulatedProfile(PiecewisePowerProfile):
    """Samples ``(t_i, I_i)`` joined linearly in log-log coordinates.

    The first and last log-log segments are extended to 0 and 1; the result is
    rescaled by one constant so that ``I(1-) = 1``.
    """

    def __init__(self, t, values, source: str | None = None):
        t = np.asarray(t, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.size != v.size or t.size < 2:
            raise ProfileError("need at least two (t, I) samples")
        if np.any(np.diff(t) <= 0):
            raise ProfileError("t must be strictly increasing")
        if t[0] <= 0 or t[-1] > 1 or np.any(v <= 0):
            raise ProfileError("samples need 0 < t <= 1 and I > 0")
        lt, lv = np.log(t), np.log(v)
        slopes = np.diff(lv) / np.diff(lt)
        coefs = np.exp(lv[:-1] - slopes * lt[:-1])
        knots = np.concatenate(([0.0], t[1:-1], [1.0]))
        scale = coefs[-1]  # value of the last segment at t = 1
        super().__init__(knots, coefs / scale, slopes, name="tabulated")
        self.samples_t = t
        self.samples_I = v / scale
        self.source = source

    def spec(self) -> str:
        return f"tab:{self.source}" if self.source else "tabulated"

    @classmethod
    def from_csv(cls, path: str | Path) -> "TabulatedProfile":
        rows = Path(path).read_text().strip().splitlines()
        if not rows or [c.strip() for c in rows[0].split(",")] != ["t", "I"]:
            raise ProfileError("tabulated profile CSV needs header 't,I'")
        data = np.array([[float(x) for x in r.split(",")] for r in rows[1:] if r.strip()])
        return cls(data[:, 0], data[:, 1], source=str(path))

    def to_csv(self) -> str:
        lines = ["t,I"] + [f"{float(a)!r},{float(b)!r}" for a, b in zip(self.samples_t, self.samples_I)]
        return "\n".join(lines) + "\n"


def tabulated_profile(t, values) -> TabulatedProfile:
    return TabulatedProfile(t, values)


# ---------------------------------------------------------------------------
# product probability spaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiSpec:
    """Young-type function ``Phi`` with derivative and inverse."""

    eval: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    name: str = "phi"

    def violations(self, grid: np.ndarray | None = None, tol: float = 1e-10) -> list[tuple[str, float]]:
        """List ``(property, witness)`` pairs for every failed requirement."""
        x = np.geomspace(1e-6, 1e3, 2000) if grid is None else np.asarray(grid, dtype=float)
        bad: list[tuple[str, float]] = []
        if abs(float(np.atleast_1d(self.eval(np.array([0.0])))[0])) > tol:
            bad.append(("Phi(0) = 0", 0.0))
        y = self.eval(x)
        dy = np.diff(y)
        if np.any(dy <= 0):
            bad.append(("strictly increasing", float(x[1:][np.argmax(dy <= 0)])))
        d = self.derivative(x)
        dd = np.diff(d)
        scale = np.maximum(np.abs(d[1:]), 1.0)
        if np.any(dd < -tol * scale):
            bad.append(("convex", float(x[1:][np.argmax(dd < -tol * scale)])))
        # sqrt(Phi) concave <=> its derivative Phi'/(2 sqrt Phi) is nonincreasing
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = d / (2.0 * np.sqrt(y))
        ds = np.diff(slope)
        sscale = np.maximum(np.abs(slope[1:]), 1.0)
        if np.any(ds > tol * sscale):
            bad.append(("sqrt(Phi) concave", float(x[1:][np.argmax(ds > tol * sscale)])))
        return bad


def phi_power(p: float) -> PhiSpec:
    """``Phi(t) = t^p``; admissible for ``1 <= p <= 2`` (``p = 2`` is the Gauss measure)."""
    p = float(p)
    return PhiSpec(
        eval=lambda x: np.power(x, p),
        derivative=lambda x: p * np.power(x, p - 1.0),
        inverse=lambda y: np.power(y, 1.0 / p),
        name=f"t^{p!r}",
    )


class ProductProfile(Profile):
    """``I(t) = K t Phi'(Phi^{-1}(log(2/t)))`` with ``K`` fixing ``I(1-) = 1``.

    The representative formula is used on all of (0, 1); see
    :meth:`symmetric` for the reflected isoperimetric function itself.
    """

    def __init__(self, phi: PhiSpec, p: float | None = None):
        self.phi = phi
        self.p = p
        self._k = 1.0 / float(self._raw(np.array([1.0]))[0])
        self.name = f"product({p!r})" if p is not None else f"product[{phi.name}]"

    def _raw(self, t):
        return t * self.phi.derivative(self.phi.inverse(np.log(2.0 / t)))

    def _eval(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, self._k * self._raw(np.maximum(t, 1e-320)), 0.0)

    def symmetric(self, t):
        """Reflected function ``t -> I(min(t, 1 - t))`` (same normalisation)."""
        t = _arr(t)
        return self(np.minimum(t, 1.0 - t))

    def ratio_at_zero(self) -> float:
        return float(self._k * self.phi.derivative(self.phi.inverse(np.array([1e300])))[0])

    def int_recip_I(self, t):
        # with x = Phi^{-1}(log 2/s) the integrand becomes dx / K on (x_t, inf)
        t = _arr(t)
        return _out(np.where(np.atleast_1d(t) > 0, np.inf, 0.0), t)

    def spec(self) -> str:
        return self.name


def product_profile(phi: PhiSpec | float) -> ProductProfile:
    """Profile of the product measure ``c exp(-Phi(|x|)) dx``.

    ``phi`` may be a :class:`PhiSpec` or an exponent ``p`` for ``Phi(t) = t^p``.
    """
    p = None
    if not isinstance(phi, PhiSpec):
        p = float(phi)
        phi = phi_power(p)
    bad = phi.violations()
    if bad:
        prop, where = bad[0]
        raise ProfileError(f"Phi violates '{prop}' near t = {where:.6g}")
    return ProductProfile(phi, p)


# ---------------------------------------------------------------------------
# further named profiles
# ---------------------------------------------------------------------------


class LogProfile(Profile):
    """``I(t) = log 2 / log(2/t)``: nondecreasing, but ``int_0 I(s)/s ds`` diverges."""

    name = "log"

    def _eval(self, t):
        with np.errstate(divide="ignore"):
            return np.where(t > 0, math.log(2.0) / np.log(2.0 / np.maximum(t, 1e-320)), 0.0)

    def inverse(self, y):
        y = _arr(y)
        with np.errstate(divide="ignore"):
            res = 2.0 * np.exp(-math.log(2.0) / np.atleast_1d(y))
        return _out(res, y)

    def ratio_at_zero(self) -> float:
        return math.inf

    def int_I_over_s(self, t):
        t = _arr(t)
        return _out(np.where(np.atleast_1d(t) > 0, np.inf, 0.0), t)

    def int_recip_I(self, t):
        t = _arr(t)
        x = np.atleast_1d(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(x > 0, x * (np.log(2.0 / np.maximum(x, 1e-320)) + 1.0) / math.log(2.0), 0.0)
        return _out(v, t)

    def int_recip_I_tail(self, t):
        total = (math.log(2.0) + 1.0) / math.log(2.0)
        t = _arr(t)
        return _out(total - np.atleast_1d(self.int_recip_I(t)), t)

    def int_s_over_I(self, t):
        t = _arr(t)
        x = np.atleast_1d(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.where(
                x > 0,
                (0.5 * x**2 * np.log(2.0 / np.maximum(x, 1e-320)) + 0.25 * x**2) / math.log(2.0),
                0.0,
            )
        return _out(v, t)


class FunctionProfile(Profile):
    """Profile given by a vectorised callable; integrals by quadrature."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], name: str = "function", normalize: bool = True):
        self._fn = fn
        self._k = 1.0 / float(fn(np.array([1.0]))[0]) if normalize else 1.0
        self.name = name

    def _eval(self, t):
        return self._k * self._fn(t)


class TildeProfile(Profile):
    """``t / I(t)`` for a base profile ``I``."""

    def __init__(self, base: Profile):
        self.base = base
        self.name = f"tilde({base.spec()})"

    def _eval(self, t):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, t / self.base._eval(np.maximum(t, 1e-320)), 0.0)

    def tilde(self) -> Profile:
        return self.base


# functional aliases mirroring the operation names
def int_I_over_s(I: Profile, t):
    return I.int_I_over_s(t)


def int_recip_I(I: Profile, t):
    return I.int_recip_I(t)


def int_I_over_s2(I: Profile, t):
    return I.int_I_over_s2(t)


def int_I_over_s3(I: Profile, t):
    return I.int_I_over_s3(t)


def find_crossing(fn, a: float, b: float) -> float:
    """Root of a monotone scalar function on ``[a, b]`` (used for inverses)."""
    return brentq(fn, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps)
