"""Rearrangement-invariant norms on (0,1), profile-driven operators and optimal Sobolev-type spaces.

Functions are exact piecewise constants (:class:`StepFunction`); operators
return :class:`EvalFunction` objects that evaluate closed forms piece by piece.
"""

from rispace.conditions import (
    ClassQResult,
    ConditionReport,
    check_average,
    check_cond1,
    check_cond4,
    check_delta2,
    check_quasiconcave,
    classQ_constants,
    profile_report,
)
from rispace.evalfunction import EvalFunction, GridFunction, maximal_fn, oscillation
from rispace.norms import (
    BigM,
    DownDualVia,
    LambdaI,
    LorentzZygmund,
    Lp,
    SmallM,
    Unsupported,
    UnsupportedAssociateError,
    WeakL1,
    ZNorm,
    associate,
    down_dual_norm,
    eval_norm,
    fundamental_function,
)
from rispace.operators import (
    apply,
    apply_GI,
    apply_H_aux,
    apply_HI,
    apply_RI,
    apply_Rprime,
    apply_SI,
    apply_TI,
    integral_TI,
)
from rispace.optimal import (
    GLZCase,
    John,
    Mazya,
    NonexistenceError,
    OptimalResult,
    domain_norm,
    glz_equivalent,
    optimal,
    sobolev_preset,
    target_assoc_norm,
    target_norm,
    theorem11_norm,
    znorm,
)
from rispace.profiles import (
    LogProfile,
    PhiSpec,
    PowerProfile,
    Profile,
    ProfileError,
    ProductProfile,
    TabulatedProfile,
    phi_power,
    power_profile,
    product_profile,
)
from rispace.specs import SpecError, parse_norm, parse_profile
from rispace.stepfunction import (
    Rearranged,
    StepFunction,
    distribution,
    integrate,
    level_function,
    optimal_decomposition,
    primitive,
    rearrange,
)

__version__ = "0.1.0"

__all__ = [
    "ClassQResult",
    "ConditionReport",
    "check_average",
    "check_cond1",
    "check_cond4",
    "check_delta2",
    "check_quasiconcave",
    "classQ_constants",
    "profile_report",
    "BigM",
    "DownDualVia",
    "LambdaI",
    "LorentzZygmund",
    "Lp",
    "SmallM",
    "Unsupported",
    "UnsupportedAssociateError",
    "WeakL1",
    "ZNorm",
    "associate",
    "down_dual_norm",
    "eval_norm",
    "fundamental_function",
    "apply",
    "apply_GI",
    "apply_H_aux",
    "apply_HI",
    "apply_RI",
    "apply_Rprime",
    "apply_SI",
    "apply_TI",
    "integral_TI",
    "GLZCase",
    "John",
    "Mazya",
    "NonexistenceError",
    "OptimalResult",
    "domain_norm",
    "glz_equivalent",
    "optimal",
    "sobolev_preset",
    "target_assoc_norm",
    "target_norm",
    "theorem11_norm",
    "znorm",
    "LogProfile",
    "PhiSpec",
    "PowerProfile",
    "Profile",
    "ProfileError",
    "ProductProfile",
    "TabulatedProfile",
    "phi_power",
    "power_profile",
    "product_profile",
    "Rearranged",
    "StepFunction",
    "distribution",
    "integrate",
    "level_function",
    "optimal_decomposition",
    "primitive",
    "rearrange",
    "EvalFunction",
    "GridFunction",
    "maximal_fn",
    "oscillation",
    "SpecError",
    "parse_norm",
    "parse_profile",
]
