"""Grid-based checks of the growth conditions a profile may satisfy.

Each check evaluates a ratio on a log-spaced grid clustered at both ends of
(0, 1), then repeats the computation on a refined superset of that grid.  A
condition passes when the sup is finite and moved by less than 5% under the
refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rispace.profiles import Profile, ProfileError

__all__ = [
    "ConditionReport",
    "ClassQResult",
    "condition_grid",
    "refine_grid",
    "check_delta2",
    "check_quasiconcave",
    "check_cond1",
    "check_average",
    "check_cond4",
    "classQ_constants",
    "profile_report",
]

DEFAULT_GRID = 10_000
STABILITY_RTOL = 0.05
LOW_EXP = -100.0
REFINED_LOW_EXP = -150.0
# points where I(t)/t^2 - 1 is smaller than this lose all digits to cancellation
_C_DENOM_FLOOR = 1e-10


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    sup_ratio: float
    grid_size: int
    stable: bool
    witness: float
    divergent: bool = False
    refined_ratio: float = float("nan")

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.sup_ratio) and self.stable and not self.divergent)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "sup_ratio": _jsonable(self.sup_ratio),
            "refined_ratio": _jsonable(self.refined_ratio),
            "grid_size": self.grid_size,
            "stable": self.stable,
            "divergent": self.divergent,
            "witness": self.witness,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ClassQResult:
    c: float
    d: float
    member: bool
    c_witness: float
    d_witness: float
    c_in_range: bool
    conditions: dict[str, ConditionReport] = field(default_factory=dict)

    @property
    def product_gap(self) -> float:
        """``(1 - c) d - c``; nonpositive for members."""
        return (1.0 - self.c) * self.d - self.c

    def to_dict(self) -> dict:
        return {
            "c": _jsonable(self.c),
            "d": _jsonable(self.d),
            "memberQ": self.member,
            "c_witness": self.c_witness,
            "d_witness": self.d_witness,
            "c_in_range": self.c_in_range,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
        }


def _jsonable(x: float):
    x = float(x)
    if np.isfinite(x):
        return x
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def condition_grid(size: int = DEFAULT_GRID, low_exp: float = LOW_EXP) -> np.ndarray:
    """Sorted grid: half log-spaced in ``[10^low_exp, 1/2]``, half as ``1 - s``."""
    half = max(size // 2, 2)
    left = np.geomspace(10.0**low_exp, 0.5, half)
    right = 1.0 - np.geomspace(1e-15, 0.5, size - half)
    return np.unique(np.concatenate((left, right)))


def refine_grid(grid: np.ndarray, low_exp: float = REFINED_LOW_EXP) -> np.ndarray:
    """Superset of ``grid``: geometric midpoints plus an extension towards 0."""
    mids = np.sqrt(grid[:-1] * grid[1:])
    step = np.log(grid[1] / grid[0])
    n_ext = int(np.ceil((np.log(grid[0]) - low_exp * np.log(10.0)) / step))
    ext = grid[0] * np.exp(-step * np.arange(1, max(n_ext, 0) + 1))
    return np.unique(np.concatenate((ext, grid, mids)))


def _sup(ratio: np.ndarray, grid: np.ndarray) -> tuple[float, float]:
    r = np.where(np.isnan(ratio), -np.inf, ratio)
    k = int(np.argmax(r))
    return float(r[k]), float(grid[k])


def _report(name: str, fn, size: int) -> ConditionReport:
    grid = condition_grid(size)
    fine = refine_grid(grid)
    coarse_val, witness = _sup(fn(grid), grid)
    fine_val, fine_w = _sup(fn(fine), fine)
    divergent = not np.isfinite(coarse_val) or not np.isfinite(fine_val)
    if divergent:
        stable = False
        witness = fine_w if not np.isfinite(fine_val) else witness
    else:
        scale = max(abs(coarse_val), 1e-300)
        stable = abs(fine_val - coarse_val) <= STABILITY_RTOL * scale
    return ConditionReport(
        condition=name,
        sup_ratio=coarse_val,
        grid_size=int(grid.size),
        stable=bool(stable),
        witness=witness,
        divergent=bool(divergent),
        refined_ratio=fine_val,
    )


def check_delta2(I: Profile, grid_size: int = DEFAULT_GRID) -> ConditionReport:
    """``sup_{t < 1/2} I(2t)/I(t)``."""

    def fn(grid):
        out = np.full(grid.shape, -np.inf)
        m = grid < 0.5
        out[m] = I(2.0 * grid[m]) / I(grid[m])
        return out

    return _report("delta2", fn, grid_size)


def check_quasiconcave(I: Profile, grid_size: int = DEFAULT_GRID, tol: float = 1e-12) -> ConditionReport:
    """Largest violation of "I nondecreasing and I(t)/t nonincreasing".

    ``sup_ratio`` is the largest relative violation found (0 when none);
    the report passes when it stays below ``tol``.
    """
    grid = refine_grid(condition_grid(grid_size))
    vals = I(grid)
    slope = vals / grid
    up = -np.diff(vals) / np.maximum(np.abs(vals[1:]), 1e-300)
    down = np.diff(slope) / np.maximum(np.abs(slope[:-1]), 1e-300)
    viol = np.maximum(up, down)
    k = int(np.argmax(viol))
    worst = max(float(viol[k]), 0.0)
    ends_ok = abs(float(I(np.array([1.0 - 1e-15]))[0]) - 1.0) < 1e-6
    return ConditionReport(
        condition="quasiconcave",
        sup_ratio=worst,
        grid_size=int(grid.size),
        stable=worst <= tol and ends_ok,
        witness=float(grid[k + 1]) if worst > 0 else float(grid[0]),
    )


def check_cond1(I: Profile, grid_size: int = DEFAULT_GRID) -> ConditionReport:
    """``sup_t (int_0^t I(s)/s ds) / I(t)``."""
    return _report("cond1", lambda t: I.int_I_over_s(t) / I(t), grid_size)


def check_average(I: Profile, grid_size: int = DEFAULT_GRID) -> ConditionReport:
    """``sup_t (int_0^t ds/I(s)) I(t)/t``."""
    return _report("average", lambda t: I.int_recip_I(t) * I(t) / t, grid_size)


def check_cond4(I: Profile, grid_size: int = DEFAULT_GRID) -> ConditionReport:
    """``sup_t (int_t^1 I(s)/s^2 ds) / ((1/t) int_0^t I(s)/s ds)``."""

    def fn(t):
        right = I.int_I_over_s(t) / t
        with np.errstate(invalid="ignore", divide="ignore"):
            return I.int_I_over_s2(t) / right

    return _report("cond4", fn, grid_size)


def _c_ratio(I: Profile, t: np.ndarray) -> np.ndarray:
    excess = I.excess_over_square(t)
    out = np.full(t.shape, np.inf)
    ok = excess > _C_DENOM_FLOOR
    out[ok] = I.int_I_over_s3(t[ok]) / excess[ok]
    return out


def classQ_constants(I: Profile, grid_size: int = DEFAULT_GRID) -> ClassQResult:
    """Constants ``c`` (an infimum) and ``d`` (a supremum) of class Q, plus membership."""
    qc = check_quasiconcave(I, grid_size)
    if not qc.passed:
        raise ProfileError(
            f"profile {I.spec()} is not quasiconcave (violation {qc.sup_ratio:.3g} at t = {qc.witness:.6g})"
        )
    grid = refine_grid(condition_grid(grid_size))
    cr = _c_ratio(I, grid)
    kc = int(np.argmin(cr))
    c = float(cr[kc])
    dr = grid / I(grid) * I.int_I_over_s2(grid)
    kd = int(np.argmax(dr))
    d = float(dr[kd])
    conds = {
        "quasiconcave": qc,
        "cond1": check_cond1(I, grid_size),
        "average": check_average(I, grid_size),
        "cond4": check_cond4(I, grid_size),
    }
    c_in_range = 0.5 - 1e-9 <= c < 1.0
    member = (
        all(r.passed for r in conds.values())
        and np.isfinite(d)
        and (1.0 - c) * d <= c + 1e-9
        and c_in_range
    )
    return ClassQResult(
        c=c,
        d=d,
        member=bool(member),
        c_witness=float(grid[kc]),
        d_witness=float(grid[kd]),
        c_in_range=bool(c_in_range),
        conditions=conds,
    )


def profile_report(I: Profile, grid_size: int = DEFAULT_GRID) -> dict:
    """All condition reports for one profile, as plain data."""
    out = {
        "profile": I.spec(),
        "quasiconcave": check_quasiconcave(I, grid_size).to_dict(),
        "delta2": check_delta2(I, grid_size).to_dict(),
        "cond1": check_cond1(I, grid_size).to_dict(),
        "average": check_average(I, grid_size).to_dict(),
        "cond4": check_cond4(I, grid_size).to_dict(),
    }
    try:
        q = classQ_constants(I, grid_size)
        out["classQ"] = {"c": _jsonable(q.c), "d": _jsonable(q.d), "memberQ": q.member}
    except ProfileError as exc:
        out["classQ"] = {"error": str(exc), "memberQ": False}
    return out
