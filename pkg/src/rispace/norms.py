"""Rearrangement-invariant (quasi)norms and their closed-form associates.

Norms accept either a :class:`StepFunction`, on which they are exact up to
floating-point summation, or an :class:`EvalFunction` produced by an operator.
Nonincreasing derived functions are integrated piece by piece; other derived
functions are first replaced by a fine midpoint step approximation and
rearranged exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sp_integrate
from scipy.optimize import minimize_scalar

from rispace import _quad
from rispace.evalfunction import NONINCREASING, EvalFunction, discretize
from rispace.profiles import Profile, TildeProfile
from rispace.stepfunction import Rearranged, StepFunction, level_function, rearrange

__all__ = [
    "NormFunctional",
    "Lp",
    "LorentzZygmund",
    "LambdaI",
    "SmallM",
    "BigM",
    "ZNorm",
    "WeakL1",
    "DownDualVia",
    "Unsupported",
    "UnsupportedAssociateError",
    "InadmissibleNormWarning",
    "NormResult",
    "eval_norm",
    "evaluate",
    "associate",
    "fundamental_function",
    "down_dual_norm",
    "lz_weight",
]

_CELLS = 64
_SAMPLES = 65


class UnsupportedAssociateError(ValueError):
    """Raised when a norm outside the closed-form associate table is dualised."""


class InadmissibleNormWarning(UserWarning):
    """Parameters describe a quasinorm only, not an r.i. norm."""


@dataclass(frozen=True)
class NormResult:
    value: float
    admissible: bool
    note: str = ""


class NormFunctional:
    kind = "norm"

    @property
    def admissible(self) -> bool:
        return True

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec()

    def __call__(self, f) -> float:
        return eval_norm(self, f)

    def _step(self, fs: Rearranged) -> float:
        raise NotImplementedError

    def _eval_fn(self, g: EvalFunction) -> float:
        # default: approximate by a rearranged step function
        return _refined(lambda cells: self._step(rearrange(discretize(g, cells))))


def _refined(fn) -> float:
    """Evaluate at two resolutions and keep the finer value."""
    a = fn(_CELLS)
    if not np.isfinite(a) or a == 0:
        return a
    return fn(2 * _CELLS)


# ---------------------------------------------------------------------------
# sampling helpers for derived functions
# ---------------------------------------------------------------------------


def _piece_grid(a: float, b: float, n: int) -> np.ndarray:
    if a <= 0.0:
        return np.geomspace(b * 1e-15, b, n)
    if b / a > 4.0:
        return np.geomspace(a, b, n)
    return np.linspace(a, b, n)


def _sup_weighted(g: EvalFunction, weight) -> float:
    """``sup_t weight(t) g(t)`` over samples, polished by bounded search."""
    best = 0.0
    for k in range(g.n_pieces):
        a, b = g.edges[k], g.edges[k + 1]
        s = _piece_grid(a, b, _SAMPLES)
        kk = np.full(s.size, k)
        with np.errstate(invalid="ignore", over="ignore"):
            vals = weight(s) * g.piece(s, kk)
        vals = np.nan_to_num(vals, nan=0.0)
        j = int(np.argmax(vals))
        top = float(vals[j])
        if 0 < j < s.size - 1 and np.isfinite(top):

            def neg(x, k=k):
                return -float(weight(np.array([x]))[0] * g.piece(np.array([x]), np.array([k]))[0])

            res = minimize_scalar(neg, bounds=(s[j - 1], s[j + 1]), method="bounded",
                                  options={"xatol": 1e-13 * s[j + 1]})
            top = max(top, -float(res.fun))
        best = max(best, top)
    return best


def _integral_nonincreasing(g: EvalFunction, weight_q, q: float) -> float:
    """``int_0^1 weight_q(t) g(t)^q dt`` piece by piece."""
    total = 0.0
    for k in range(g.n_pieces):
        a, b = g.edges[k], g.edges[k + 1]

        def h(s, k=k):
            flat = s.ravel()
            vals = g.piece(flat, np.full(flat.size, k))
            with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
                out = weight_q(flat) * np.where(vals > 0, vals**q, 0.0)
            return out.reshape(s.shape)

        if a <= 0.0:
            part = float(_quad.integrate_from_zero(h, np.array([b]))[0])
        else:
            part = float(_quad.integrate_log(h, np.array([a]), np.array([b]))[0])
        total += part
    return total


# ---------------------------------------------------------------------------
# Lebesgue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lp(NormFunctional):
    p: float
    kind = "Lp"

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError(f"Lp needs p >= 1, got {self.p}")

    def spec(self) -> str:
        return f"Lp:{_fmt(self.p)}"

    def _step(self, fs: StepFunction) -> float:
        v, ln = fs.values, fs.lengths
        if math.isinf(self.p):
            return float(np.max(v[ln > 0])) if v.size else 0.0
        return math.fsum(v**self.p * ln) ** (1.0 / self.p)

    def _eval_fn(self, g: EvalFunction) -> float:
        if math.isinf(self.p):
            if g.monotonicity == NONINCREASING and g.zero_limit is not None:
                return float(g.zero_limit)
            return _sup_weighted(g, lambda s: np.ones_like(s))
        val = _integral_nonincreasing(g, lambda s: np.ones_like(s), self.p)
        return val ** (1.0 / self.p)


# ---------------------------------------------------------------------------
# Lorentz-Zygmund
# ---------------------------------------------------------------------------


def lz_weight(p: float, q: float, beta: float, gamma: float = 0.0):
    """Weight ``t^{1/p - 1/q} l1^beta l2^gamma`` as a vectorised callable."""
    a = (0.0 if math.isinf(p) else 1.0 / p) - (0.0 if math.isinf(q) else 1.0 / q)

    def w(t):
        t = np.asarray(t, dtype=float)
        l1 = 1.0 - np.log(t)
        l2 = 1.0 + np.log(l1)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return t**a * l1**beta * l2**gamma

    return w


@dataclass(frozen=True)
class LorentzZygmund(NormFunctional):
    """``|| t^{1/p - 1/q} l1^beta l2^gamma f*(t) ||_{L^q}``."""

    p: float
    q: float
    beta: float = 0.0
    gamma: float = 0.0
    kind = "LZ"

    def __post_init__(self):
        if not (self.p >= 1.0) or not (self.q > 0.0):
            raise ValueError(f"LZ needs p >= 1 and q > 0, got p={self.p}, q={self.q}")

    def spec(self) -> str:
        return f"LZ:{_fmt(self.p)},{_fmt(self.q)},{_fmt(self.beta)},{_fmt(self.gamma)}"

    @property
    def admissible(self) -> bool:
        p, q, b, c = self.p, self.q, self.beta, self.gamma
        if q < 1.0:
            return False
        if p == 1.0:
            return q == 1.0 and b >= 0.0 and (b > 0.0 or c >= 0.0)
        if 1.0 < p < math.inf:
            return True
        if math.isinf(q):
            return b < 0.0 or (b == 0.0 and c <= 0.0)
        lead = b + 1.0 / q
        return lead < 0.0 or (abs(lead) < 1e-15 and c + 1.0 / q < 0.0)

    def _exponents(self):
        A = self.q / self.p if not math.isinf(self.p) else 0.0
        return A, self.beta * self.q, self.gamma * self.q

    def _wq(self, s):
        # weight to the power q: s^{A-1} l1^B l2^C
        A, B, C = self._exponents()
        l1 = 1.0 - np.log(s)
        l2 = 1.0 + np.log(l1)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return s ** (A - 1.0) * l1**B * l2**C

    def weight_mass(self, t: float) -> float:
        """``W(t) = int_0^t w(s)^q ds`` (``inf`` when divergent)."""
        if t <= 0:
            return 0.0
        A, B, C = self._exponents()
        U = -math.log(t)
        if A == 0.0:
            if B > -1.0 or (B == -1.0 and C >= -1.0):
                return math.inf
            if C == 0.0:
                return (1.0 + U) ** (B + 1.0) / (-B - 1.0)
            if B == -1.0:
                return (1.0 + math.log1p(U)) ** (C + 1.0) / (-C - 1.0)
        if B == 0.0 and C == 0.0:
            return t**A / A

        def g(u):
            return math.exp(-A * u) * (1.0 + u) ** B * (1.0 + math.log1p(u)) ** C

        val, _ = sp_integrate.quad(g, U, math.inf, epsabs=0.0, epsrel=1e-12, limit=400)
        return float(val)

    def _masses(self, edges: np.ndarray) -> np.ndarray:
        """``W(e_{k+1}) - W(e_k)`` for consecutive edges starting at 0."""
        first = self.weight_mass(float(edges[1]))
        rest = _quad.integrate_log(self._wq, edges[1:-1], edges[2:]) if edges.size > 2 else np.zeros(0)
        return np.concatenate(([first], rest))

    def _sup_weight_on(self, a: float, b: float) -> float:
        w = lz_weight(self.p, self.q, self.beta, self.gamma)
        if a <= 0.0:
            A, B, C = self._exponents()
            lead = 0.0 if math.isinf(self.p) else 1.0 / self.p
            if lead == 0.0 and (self.beta > 0 or (self.beta == 0 and self.gamma > 0)):
                return math.inf
        s = _piece_grid(a, b, _SAMPLES)
        vals = w(s)
        j = int(np.argmax(vals))
        top = float(vals[j])
        if 0 < j < s.size - 1:
            res = minimize_scalar(lambda x: -float(w(np.array([x]))[0]), bounds=(s[j - 1], s[j + 1]),
                                  method="bounded", options={"xatol": 1e-13 * s[j + 1]})
            top = max(top, -float(res.fun))
        return top

    def _step(self, fs: Rearranged) -> float:
        v = fs.values
        live = v > 0
        if not np.any(live):
            return 0.0
        if math.isinf(self.q):
            sups = [v[k] * self._sup_weight_on(fs.edges[k], fs.edges[k + 1]) for k in np.nonzero(live)[0]]
            return float(max(sups))
        mass = self._masses(fs.edges)
        with np.errstate(invalid="ignore"):
            terms = np.where(live, v**self.q * mass, 0.0)
        return math.fsum(terms) ** (1.0 / self.q)

    def _eval_fn(self, g: EvalFunction) -> float:
        if g.monotonicity != NONINCREASING:
            return super()._eval_fn(g)
        if math.isinf(self.q):
            return _sup_weighted(g, lz_weight(self.p, self.q, self.beta, self.gamma))
        A, _, _ = self._exponents()
        if A == 0.0:
            return super()._eval_fn(g)
        return _integral_nonincreasing(g, self._wq, self.q) ** (1.0 / self.q)


# ---------------------------------------------------------------------------
# profile-based endpoint norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LambdaI(NormFunctional):
    """``int_0^1 (I(s)/s) f*(s) ds``."""

    I: Profile
    kind = "Lambda"

    def spec(self) -> str:
        return f"Lambda:{self.I.spec()}"

    def _step(self, fs: Rearranged) -> float:
        v = fs.values
        live = v > 0
        if not np.any(live):
            return 0.0
        J = np.asarray(self.I.int_I_over_s(fs.edges), dtype=float)
        J[0] = 0.0
        if not np.isfinite(J[1]):
            return math.inf  # f* > 0 near 0 and the weight is not integrable there
        mass = np.diff(J)
        return math.fsum(np.where(live, v * mass, 0.0))

    def _eval_fn(self, g: EvalFunction) -> float:
        if g.monotonicity != NONINCREASING:
            return super()._eval_fn(g)
        I = self.I
        return _integral_nonincreasing(g, lambda s: I(s) / s, 1.0)


@dataclass(frozen=True, eq=False)
class SmallM(NormFunctional):
    """``sup_s I(s) f*(s)``."""

    I: Profile
    kind = "mI"

    def spec(self) -> str:
        return f"mI:{self.I.spec()}"

    def _step(self, fs: Rearranged) -> float:
        v = fs.values
        return float(np.max(v * self.I(fs.edges[1:])))

    def _eval_fn(self, g: EvalFunction) -> float:
        if g.monotonicity != NONINCREASING:
            return super()._eval_fn(g)
        return _sup_weighted(g, self.I)


@dataclass(frozen=True, eq=False)
class BigM(NormFunctional):
    """``sup_t I(t) f**(t)``."""

    I: Profile
    kind = "MI"

    def spec(self) -> str:
        return f"MI:{self.I.spec()}"

    def _step(self, fs: Rearranged) -> float:
        from rispace.evalfunction import maximal_fn

        return _sup_weighted(maximal_fn(fs), self.I)


@dataclass(frozen=True)
class WeakL1(NormFunctional):
    """``sup_t t f*(t)``."""

    kind = "WeakL1"

    def spec(self) -> str:
        return "WeakL1"

    def _step(self, fs: Rearranged) -> float:
        return float(np.max(fs.values * fs.edges[1:]))

    def _eval_fn(self, g: EvalFunction) -> float:
        if g.monotonicity != NONINCREASING:
            return super()._eval_fn(g)
        return _sup_weighted(g, lambda s: s)


@dataclass(frozen=True, eq=False)
class ZNorm(NormFunctional):
    """``f -> || S_I f ||_base``."""

    base: NormFunctional
    I: Profile
    kind = "Z"

    @property
    def admissible(self) -> bool:
        return self.base.admissible

    def spec(self) -> str:
        return f"Z:{self.base.spec()}@{self.I.spec()}"

    def _apply(self, f) -> float:
        from rispace.operators import apply_SI

        return evaluate(self.base, apply_SI(self.I, f)).value

    def _step(self, fs: Rearranged) -> float:
        return self._apply(fs)

    def _eval_fn(self, g: EvalFunction) -> float:
        return self._apply(g)


@dataclass(frozen=True, eq=False)
class DownDualVia(NormFunctional):
    """Down-dual norm of ``base``: the associate norm applied to the level function."""

    base: NormFunctional
    kind = "Down"

    def spec(self) -> str:
        return f"Down:{self.base.spec()}"

    def __call__(self, f: StepFunction) -> float:
        return down_dual_norm(self.base, f)


@dataclass(frozen=True)
class Unsupported(NormFunctional):
    """Marker for an associate outside the closed-form table."""

    source: str
    kind = "Unsupported"

    @property
    def admissible(self) -> bool:
        return False

    def spec(self) -> str:
        return f"Unsupported(associate of {self.source})"


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x)) if x != int(x) else str(int(x))


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def evaluate(N: NormFunctional, f) -> NormResult:
    """Norm value together with the admissibility flag of ``N``."""
    if isinstance(N, Unsupported):
        raise UnsupportedAssociateError(N.spec())
    if isinstance(N, DownDualVia):
        return NormResult(down_dual_norm(N.base, f), N.admissible)
    if isinstance(f, StepFunction):
        val = N._step(rearrange(f))
    elif isinstance(f, EvalFunction):
        val = N._eval_fn(f)
    else:
        raise TypeError(f"cannot evaluate a norm on {type(f).__name__}")
    note = "" if N.admissible else "parameters define a quasinorm only"
    return NormResult(float(val), N.admissible, note)


def eval_norm(N: NormFunctional, f) -> float:
    """``||f||_N``; ``inf`` is a legal value.  Warns for inadmissible parameters."""
    res = evaluate(N, f)
    if not res.admissible:
        warnings.warn(f"{N.spec()}: {res.note}", InadmissibleNormWarning, stacklevel=2)
    return res.value


@dataclass(frozen=True)
class AssociatePair:
    norm: NormFunctional
    exact: bool


def associate_pair(N: NormFunctional) -> AssociatePair:
    """Associate of ``N`` from the closed-form table, with an exactness flag.

    ``exact`` is False when the table entry holds up to equivalence constants
    only (the Lorentz/Marcinkiewicz pair built from a profile).
    """
    if isinstance(N, Lp):
        p = N.p
        if p == 1.0:
            return AssociatePair(Lp(math.inf), True)
        if math.isinf(p):
            return AssociatePair(Lp(1.0), True)
        return AssociatePair(Lp(p / (p - 1.0)), True)
    if isinstance(N, LorentzZygmund) and N.beta == 0 and N.gamma == 0 and N.p == N.q and not math.isinf(N.p):
        return associate_pair(Lp(N.p))
    if isinstance(N, LorentzZygmund) and 1.0 < N.p < math.inf and N.q >= 1.0:
        # (L^{p,q,b,c})' = L^{p',q',-b,-c} with equivalent, not equal, norms
        pc = N.p / (N.p - 1.0)
        qc = math.inf if N.q == 1.0 else (1.0 if math.isinf(N.q) else N.q / (N.q - 1.0))
        return AssociatePair(LorentzZygmund(pc, qc, -N.beta, -N.gamma), False)
    if isinstance(N, LambdaI):
        return AssociatePair(SmallM(N.I.tilde()), False)
    if isinstance(N, SmallM):
        base = N.I.base if isinstance(N.I, TildeProfile) else N.I.tilde()
        return AssociatePair(LambdaI(base), False)
    return AssociatePair(Unsupported(N.spec()), False)


def associate(N: NormFunctional) -> NormFunctional:
    return associate_pair(N).norm


def fundamental_function(N: NormFunctional, t):
    """``phi_N(t) = ||chi_(0,t)||_N``; vectorised over ``t``."""
    t = np.asarray(t, dtype=float)
    flat = np.atleast_1d(t).ravel()
    out = np.array([
        0.0 if x <= 0 else (evaluate(N, StepFunction.constant(1.0)).value if x >= 1
                            else evaluate(N, StepFunction.indicator(0.0, float(x))).value)
        for x in flat
    ])
    return out.reshape(np.shape(t)) if t.ndim else float(out[0])


def down_dual_norm(X: NormFunctional, f: StepFunction) -> float:
    """``|| f° ||_{X'}`` with ``f°`` the level function of ``f``."""
    A = associate(X)
    if isinstance(A, Unsupported):
        raise UnsupportedAssociateError(A.spec())
    return evaluate(A, level_function(f)).value
