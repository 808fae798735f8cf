"""Optimal target and domain norms for the reduced Sobolev operator ``H_I``.

Given a domain norm ``X`` and a profile ``I``, the optimal target norm is

    ||(I(t)/t) (f**(t) - f*(t))||_X + ||f||_1,

valid for profiles of class Q.  Given a target norm ``Y``, the optimal domain
norm is ``||H_I f*||_Y`` provided ``H_I 1`` lies in ``Y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from rispace.conditions import check_cond1, classQ_constants
from rispace.evalfunction import NO_MONOTONICITY, EvalFunction
from rispace.norms import (
    Lp,
    LorentzZygmund,
    NormFunctional,
    Unsupported,
    UnsupportedAssociateError,
    ZNorm,
    associate,
    eval_norm,
)
from rispace.operators import apply_HI, apply_RI, apply_SI
from rispace.profiles import PowerProfile, Profile, ProfileError
from rispace.stepfunction import StepFunction, integrate, rearrange

__all__ = [
    "OptimalResult",
    "NonexistenceError",
    "GLZCase",
    "John",
    "Mazya",
    "weighted_oscillation",
    "target_norm",
    "target_assoc_norm",
    "domain_norm",
    "znorm",
    "theorem11_norm",
    "Theorem11Estimator",
    "sobolev_preset",
    "glz_equivalent",
    "optimal",
]


class NonexistenceError(ValueError):
    """No optimal domain exists because ``H_I 1`` is not in the target space."""


@dataclass(frozen=True)
class OptimalResult:
    value: float
    warnings: tuple[str, ...] = ()
    regime: str = ""
    profile_report: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value


@lru_cache(maxsize=64)
def _profile_regime(spec: str, I: Profile) -> tuple[str, dict]:
    del spec  # cache key only
    try:
        q = classQ_constants(I)
    except ProfileError as exc:
        return "not-quasiconcave", {"error": str(exc)}
    report = q.to_dict()
    if q.member:
        return "classQ", report
    if q.conditions["cond1"].passed:
        return "cond1-only", report
    return "outside", report


def profile_regime(I: Profile) -> tuple[str, dict]:
    """``classQ``, ``cond1-only`` (norm description only), ``outside`` or ``not-quasiconcave``."""
    return _profile_regime(I.spec(), I)


# ---------------------------------------------------------------------------
# target side
# ---------------------------------------------------------------------------


def weighted_oscillation(I: Profile, f: StepFunction) -> EvalFunction:
    """``t -> (I(t)/t)(f**(t) - f*(t))``, equal to ``d_k I(t)/t^2`` on piece ``k`` of ``f*``."""
    fs = rearrange(f)
    e, v = fs.edges, fs.values
    prim = np.concatenate(([0.0], np.cumsum(v * fs.lengths)))
    d = prim[:-1] - v * e[:-1]

    def piece(t, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(d[k] > 0, d[k] * I(t) / (t * t), 0.0)

    return EvalFunction(e, piece, NO_MONOTONICITY, f"osc[{I.spec()}]", 0.0, np.where(d > 0, -1.0, 0.0))


def target_norm(X: NormFunctional, I: Profile, f: StepFunction) -> float:
    """``||(I/t)(f** - f*)||_X + ||f||_1``."""
    if f.is_zero():
        return 0.0
    return eval_norm(X, weighted_oscillation(I, f)) + integrate(f)


def target_assoc_norm(X: NormFunctional, I: Profile, f: StepFunction) -> float:
    """``||R_I f*||_{X'}``, the associate of the optimal target norm."""
    A = associate(X)
    if isinstance(A, Unsupported):
        raise UnsupportedAssociateError(A.spec())
    if f.is_zero():
        return 0.0
    return eval_norm(A, apply_RI(I, rearrange(f)))


# ---------------------------------------------------------------------------
# domain side
# ---------------------------------------------------------------------------


def domain_norm(Y: NormFunctional, I: Profile, f: StepFunction) -> float:
    """``||H_I f*||_Y``; raises :class:`NonexistenceError` when ``H_I 1`` is not in ``Y``."""
    one = eval_norm(Y, apply_HI(I, StepFunction.constant(1.0)))
    if not np.isfinite(one):
        raise NonexistenceError(f"H_I 1 is not in {Y.spec()} for I = {I.spec()}: no optimal domain exists")
    if f.is_zero():
        return 0.0
    return eval_norm(Y, apply_HI(I, rearrange(f)))


def znorm(X: NormFunctional, I: Profile) -> ZNorm:
    """``f -> ||S_I f||_X``."""
    return ZNorm(X, I)


class Theorem11Estimator:
    """Corpus lower-bound estimate of the supremum form of the target norm.

    Maximises ``sum_j I(t_j) g*(t_j) |jump of f* at t_j|`` over ``g`` in the
    corpus, each normalised so that ``||S_I g||_{X'} = 1``, then adds
    ``||f||_1``.  The true supremum runs over the whole unit ball, so the
    value can only under-estimate it.  Normalisations are computed once.
    """

    def __init__(self, X: NormFunctional, I: Profile, corpus: Sequence[StepFunction]):
        A = associate(X)
        if isinstance(A, Unsupported):
            raise UnsupportedAssociateError(A.spec())
        self.X, self.I = X, I
        self._unit: list[StepFunction] = []
        for g in corpus:
            if g.is_zero():
                continue
            scale = eval_norm(A, apply_SI(I, g))
            if np.isfinite(scale) and scale > 0:
                self._unit.append(rearrange(g) * (1.0 / scale))

    def __call__(self, f: StepFunction) -> float:
        fs = rearrange(f)
        base = integrate(f)
        jumps_at = fs.edges[1:-1]
        if jumps_at.size == 0 or not self._unit:
            return base
        weights = self.I(jumps_at) * (fs.values[:-1] - fs.values[1:])
        best = max(float(np.dot(weights, g(jumps_at))) for g in self._unit)
        return max(best, 0.0) + base


def theorem11_norm(
    X: NormFunctional, I: Profile, f: StepFunction, corpus: Sequence[StepFunction]
) -> float:
    """One-shot :class:`Theorem11Estimator`; a lower bound over ``corpus``."""
    return Theorem11Estimator(X, I, corpus)(f)


# ---------------------------------------------------------------------------
# presets and the Lorentz-Zygmund classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class John:
    n: int
    m: int

    @property
    def alpha(self) -> float:
        return 1.0 - 1.0 / self.n

    @property
    def exponent(self) -> float:
        return 1.0 - self.m / self.n

    def validate(self) -> None:
        if self.n < 2 or self.m < 1 or self.m >= self.n:
            raise ValueError(f"John preset needs n >= 2 and 1 <= m < n, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class Mazya:
    alpha: float
    m: int
    n: int | None = None

    @property
    def exponent(self) -> float:
        return 1.0 - self.m * (1.0 - self.alpha)

    def validate(self) -> None:
        low = 0.0 if self.n is None else 1.0 - 1.0 / self.n
        if not (low <= self.alpha < 1.0) or self.m < 1:
            raise ValueError(f"Maz'ya preset needs {low:g} <= alpha < 1 and m >= 1, got alpha={self.alpha}")
        if self.exponent <= 0:
            raise ValueError(f"Maz'ya preset needs 1 - m(1 - alpha) > 0, got {self.exponent}")


def sobolev_preset(kind: John | Mazya) -> PowerProfile:
    """Power profile ``t^{1 - m(1 - alpha)}`` of a John or Maz'ya domain."""
    kind.validate()
    return PowerProfile(kind.exponent)


@dataclass(frozen=True)
class GLZCase:
    p: float
    q: float
    beta: float
    alpha: float
    m: int
    branch: str
    norm: NormFunctional
    critical_p: float

    @property
    def domain_norm(self) -> LorentzZygmund:
        return LorentzZygmund(self.p, self.q, self.beta)


def _exact(x: float) -> Fraction:
    if math.isinf(x):
        raise ValueError("value must be finite here")
    return Fraction(x).limit_denominator(10**6)


def glz_equivalent(p: float, q: float, beta: float, alpha: float, m: int) -> GLZCase:
    """Branch and equivalent norm of the optimal target for ``X = L^{p,q,beta}``.

    The comparisons are done on rationals (denominators up to 10^6) so that
    critical exponents given as floats like ``3.0000000000000004`` are
    recognised.
    """
    X = LorentzZygmund(p, q, beta)
    if not X.admissible:
        raise ValueError(f"L^{{p,q,beta}} with p={p}, q={q}, beta={beta} is not an admissible r.i. norm")
    if math.isinf(p):
        raise ValueError("the domain exponent p must be finite")
    scale = m * (1 - _exact(alpha))
    if not 0 < scale < 1:
        raise ValueError(f"need 1 - m(1 - alpha) > 0 and alpha < 1, got m(1-alpha) = {float(scale)}")
    P = _exact(p)
    crit = 1 / scale
    B = _exact(beta)
    inf_q = math.isinf(q)
    edge = Fraction(1) if inf_q else 1 - 1 / _exact(q)
    if (p == 1.0 and q == 1.0 and beta >= 0) or (1 < P < crit):
        inv = 1 / P - scale
        norm: NormFunctional = LorentzZygmund(float(1 / inv), q, beta)
        branch = "i"
    elif P == crit and B < edge and not (q == 1.0 and beta >= 0):
        norm = LorentzZygmund(math.inf, q, beta - 1.0)
        branch = "ii"
    elif P == crit and B == edge and q > 1.0:
        norm = LorentzZygmund(math.inf, q, -1.0 / q if not inf_q else 0.0, -1.0)
        branch = "iii"
    else:
        norm = Lp(math.inf)
        branch = "iv"
    return GLZCase(p, q, beta, alpha, m, branch, norm, float(crit))


# ---------------------------------------------------------------------------
# one entry point for the command line
# ---------------------------------------------------------------------------


def optimal(mode: str, space: NormFunctional, I: Profile, f: StepFunction, allow_outside: bool = False) -> OptimalResult:
    """Evaluate one of ``target``, ``domain`` or ``target-assoc`` with metadata."""
    regime, report = profile_regime(I)
    notes: list[str] = []
    if mode == "target":
        if regime != "classQ":
            msg = f"profile {I.spec()} is not in class Q (regime: {regime}); the target formula is not certified"
            if regime == "cond1-only":
                msg += " beyond the supremum description, which needs only cond1"
            notes.append(msg)
        value = target_norm(space, I, f)
    elif mode == "target-assoc":
        if not check_cond1(I).passed:
            notes.append(f"profile {I.spec()} fails cond1")
        value = target_assoc_norm(space, I, f)
    elif mode == "domain":
        value = domain_norm(space, I, f)
    else:
        raise ValueError(f"unknown mode {mode!r}; choose target, domain or target-assoc")
    if not space.admissible:
        notes.append(f"{space.spec()} is a quasinorm only")
    if notes and allow_outside:
        notes.append("override accepted by caller")
    return OptimalResult(float(value), tuple(notes), regime, report)
