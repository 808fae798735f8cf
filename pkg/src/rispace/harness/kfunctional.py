"""K-functional of the couple (m_I, L-infinity) on step functions.

For a step function the closed-form expression ``sup_{s <= I^{-1}(t)} I(s) f*(s)``
is compared with two computable quantities:

* the cost of the optimal decomposition at ``I^{-1}(t)``, an upper bound for K
  that the factor-2 estimate caps at twice the closed form;
* the best threshold decomposition ``f = min(f, lam) + (f - lam)_+`` over all
  levels ``lam``, a brute-force stand-in for the infimum defining K.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rispace.conditions import check_delta2
from rispace.harness.report import Assertion, SuiteResult
from rispace.norms import SmallM, eval_norm
from rispace.profiles import Profile
from rispace.stepfunction import StepFunction, optimal_decomposition, rearrange

__all__ = ["KRow", "k_formula", "k_upper", "k_brute", "kfunctional_rows", "kfunctional_check", "DEFAULT_TS"]


@dataclass(frozen=True)
class KRow:
    member: str
    t: float
    formula: float
    upper: float
    brute: float


def k_formula(I: Profile, f: StepFunction, t: float) -> float:
    """``sup_{0 < s <= I^{-1}(t)} I(s) f*(s)``, exact on the pieces of ``f*``."""
    tau = float(I.inverse(t))
    fs = rearrange(f)
    left = fs.edges[:-1]
    live = left < tau
    right = np.minimum(fs.edges[1:][live], tau)
    return float(np.max(fs.values[live] * I(right)))


def k_upper(I: Profile, f: StepFunction, t: float) -> float:
    """``||f1||_{m_I} + t ||f0||_inf`` for the optimal decomposition at ``I^{-1}(t)``."""
    tau = float(I.inverse(t))
    if tau >= 1.0:
        return eval_norm(SmallM(I), f)
    f0, f1 = optimal_decomposition(f, tau)
    return eval_norm(SmallM(I), f1) + t * float(np.max(f0.values))


def k_brute(I: Profile, f: StepFunction, t: float) -> float:
    """Minimum over thresholds ``lam`` of ``||(f - lam)_+||_{m_I} + t min(lam, sup f)``."""
    fs = rearrange(f)
    v, right = fs.values, fs.edges[1:]
    levels = np.unique(np.concatenate(([0.0], v, np.linspace(0.0, v[0], 65))))
    Ir = I(right)
    # m_I norm of (f* - lam)_+ is max_k (v_k - lam)_+ I(e_{k+1})
    excess = np.maximum(v[None, :] - levels[:, None], 0.0) * Ir[None, :]
    costs = excess.max(axis=1) + t * np.minimum(levels, v[0])
    return float(costs.min())


def kfunctional_rows(I: Profile, members, labels, ts) -> list[KRow]:
    rows = []
    for f, label in zip(members, labels):
        if f.is_zero():
            continue
        for t in ts:
            rows.append(KRow(label, float(t), k_formula(I, f, t), k_upper(I, f, t), k_brute(I, f, t)))
    return rows


DEFAULT_TS = tuple(float(x) for x in np.geomspace(1e-3, 0.99, 20))
_REL = 1e-12


def kfunctional_check(I: Profile, corpus, ts=DEFAULT_TS, seed: int = 0) -> SuiteResult:
    """Factor-2 upper bound and threshold lower bound over ``corpus`` x ``ts``."""
    rows = kfunctional_rows(I, corpus.members, corpus.labels, ts)
    up = np.array([r.upper / r.formula for r in rows])
    low = np.array([r.formula / r.brute for r in rows])
    lookup = dict(zip(corpus.labels, corpus.members))
    i_up, i_low = int(np.argmax(up)), int(np.argmax(low))
    # formula <= C K holds with C the doubling constant sup I(2s)/I(s)
    c_delta2 = check_delta2(I).sup_ratio
    ok_up = bool(up[i_up] <= 2.0 * (1 + _REL))
    ok_low = bool(low[i_low] <= c_delta2 * (1 + _REL))
    consistent = max(r.brute / r.upper for r in rows) <= 1 + _REL
    return SuiteResult(
        "kfunctional",
        seed,
        [
            Assertion(
                "upper-within-factor-2",
                ok_up,
                {"max_upper_over_formula": float(up[i_up]), "at": [rows[i_up].member, rows[i_up].t], "pairs": len(rows)},
                2.0,
                None if ok_up else lookup[rows[i_up].member].to_csv(),
            ),
            Assertion(
                "threshold-lower-bound",
                ok_low,
                {"max_formula_over_brute": float(low[i_low]), "at": [rows[i_low].member, rows[i_low].t]},
                {"doubling_constant": c_delta2},
                None if ok_low else lookup[rows[i_low].member].to_csv(),
            ),
            Assertion("threshold-search-includes-optimal-split", bool(consistent),
                      max(r.brute / r.upper for r in rows), 1 + _REL),
        ],
    )
