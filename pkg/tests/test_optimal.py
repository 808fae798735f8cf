import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import step_functions
from rispace.harness.corpus import gen_corpus
from rispace.norms import LorentzZygmund, Lp, SmallM, UnsupportedAssociateError, WeakL1, ZNorm, eval_norm
from rispace.operators import apply_SI
from rispace.optimal import (
    GLZCase,
    John,
    Mazya,
    NonexistenceError,
    Theorem11Estimator,
    domain_norm,
    glz_equivalent,
    optimal,
    sobolev_preset,
    target_assoc_norm,
    target_norm,
    theorem11_norm,
    weighted_oscillation,
    znorm,
)
from rispace.profiles import power_profile, product_profile
from rispace.stepfunction import StepFunction, dilate, integrate, rearrange

SQRT = power_profile(0.5)
J23 = power_profile(2.0 / 3.0)
L2 = Lp(2.0)


# -- presets --------------------------------------------------------------------


def test_presets():
    assert sobolev_preset(John(3, 1)).alpha == pytest.approx(2 / 3, rel=1e-15)
    assert sobolev_preset(Mazya(0.75, 2)).alpha == pytest.approx(0.5, rel=1e-15)
    assert sobolev_preset(John(2, 1)).alpha == pytest.approx(0.5, rel=1e-15)


@pytest.mark.parametrize("bad", [John(1, 1), John(3, 3), Mazya(0.5, 2), Mazya(1.0, 1), Mazya(0.6, 1, n=3)])
def test_presets_reject_invalid(bad):
    with pytest.raises(ValueError):
        sobolev_preset(bad)


# -- target norm -------------------------------------------------------------


def test_target_examples():
    assert target_norm(L2, J23, StepFunction.constant(1.7)) == pytest.approx(1.7, rel=1e-15)
    assert target_norm(L2, J23, StepFunction.zero()) == 0.0


@pytest.mark.parametrize("r", [0.5, 0.1, 1e-3])
def test_target_indicator_closed_form(r):
    # oscillation weight r t^{-4/3} on (r, 1): r^2 int_r^1 t^{-8/3} dt = r^2 (r^{-5/3} - 1) * 3/5
    expected = math.sqrt(r * r * (r ** (-5 / 3) - 1) * 0.6) + r
    assert target_norm(L2, J23, StepFunction.indicator(0.0, r)) == pytest.approx(expected, rel=1e-9)


def test_weighted_oscillation_vanishes_on_first_piece(staircase):
    w = weighted_oscillation(SQRT, staircase)
    assert w(0.1) == 0.0
    # on (0.2, 0.7): f** - f* = 0.2 / t
    assert w(0.5) == pytest.approx(math.sqrt(0.5) / 0.5 * 0.2 / 0.5, rel=1e-14)


@given(step_functions(), st.floats(0.01, 100.0))
def test_target_scaling(f, c):
    assert target_norm(L2, J23, f * c) == pytest.approx(c * target_norm(L2, J23, f), rel=1e-9, abs=1e-12)


@given(step_functions())
def test_target_rearrangement_invariant(f):
    assert target_norm(L2, J23, f) == pytest.approx(target_norm(L2, J23, rearrange(f)), rel=1e-12, abs=1e-15)


@given(step_functions())
def test_target_dominates_l1(f):
    assert target_norm(L2, J23, f) >= integrate(f) * (1 - 1e-12)


# -- associate of the target ---------------------------------------------------


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
@pytest.mark.parametrize("r", [0.5, 0.05])
def test_target_assoc_l1_indicator(alpha, r):
    I = power_profile(alpha)
    val = target_assoc_norm(Lp(1.0), I, StepFunction.indicator(0.0, r))
    assert val == pytest.approx(r ** (1 - alpha), rel=1e-12)


def test_target_assoc_examples(staircase):
    assert target_assoc_norm(L2, SQRT, StepFunction.zero()) == 0.0
    # X = L1: sup_t (t/I(t)) f**(t), the Marcinkiewicz norm of the dual profile
    fs = rearrange(staircase)
    t = np.concatenate((np.geomspace(1e-9, 1.0, 200_001), fs.edges[1:]))
    prim = np.interp(t, fs.edges, np.concatenate(([0.0], np.cumsum(fs.values * fs.lengths))))
    ref = np.max(prim / np.sqrt(t))
    assert target_assoc_norm(Lp(1.0), SQRT, staircase) == pytest.approx(ref, rel=1e-8)
    with pytest.raises(UnsupportedAssociateError):
        target_assoc_norm(WeakL1(), SQRT, staircase)


# -- domain norm -------------------------------------------------------------


def test_domain_examples():
    assert domain_norm(Lp(math.inf), SQRT, StepFunction.constant(1.0)) == pytest.approx(2.0, rel=1e-14)
    assert domain_norm(Lp(math.inf), SQRT, StepFunction.zero()) == 0.0
    with pytest.raises(NonexistenceError):
        domain_norm(Lp(math.inf), power_profile(1.0), StepFunction.constant(1.0))


def test_domain_exists_for_linear_profile_in_l2():
    # H_I 1 = log(1/t) is square integrable
    assert domain_norm(L2, power_profile(1.0), StepFunction.constant(1.0)) == pytest.approx(math.sqrt(2.0), rel=1e-9)


@given(step_functions(), st.floats(0.1, 0.9))
def test_domain_monotone_envelope(f, s):
    fs = rearrange(f)
    g = dilate(fs, s) * (1.0 / s)  # g** >= f** with equal mass
    Y = LorentzZygmund(3.0, 2.0)
    assert domain_norm(Y, SQRT, f) <= domain_norm(Y, SQRT, g) * (1 + 1e-9) + 1e-12


# -- Z norm ---------------------------------------------------------------------


def test_znorm_examples():
    Z = znorm(Lp(math.inf), J23)
    assert isinstance(Z, ZNorm)
    assert eval_norm(Z, StepFunction.indicator(0.0, 0.01)) == pytest.approx(1.0, rel=1e-14)
    assert eval_norm(znorm(L2, J23), StepFunction.constant(3.0)) == pytest.approx(3.0, rel=1e-14)


@pytest.mark.parametrize("f", gen_corpus(7, 20).members, ids=lambda f: f"n{f.n_pieces}")
def test_znorm_idempotent_on_corpus(f):
    Z = znorm(Lp(1.5), SQRT)
    assert eval_norm(Z, apply_SI(SQRT, f)) == pytest.approx(eval_norm(Z, f), rel=1e-9)


# -- supremum form estimator -----------------------------------------------------


def test_theorem11_examples():
    corpus = gen_corpus(3, 40).members
    c = StepFunction.constant(2.0)
    assert theorem11_norm(L2, SQRT, c, corpus) == pytest.approx(2.0, rel=1e-15)
    chi = StepFunction.indicator(0.0, 0.3)
    assert theorem11_norm(L2, SQRT, chi, []) == pytest.approx(0.3, rel=1e-15)


def test_theorem11_single_jump_reduction():
    corpus = gen_corpus(5, 60).members
    r = 0.3
    est = Theorem11Estimator(L2, SQRT, corpus)
    # sup over the normalised corpus of I(r) g*(r), computed directly
    best = 0.0
    for g in corpus:
        if g.is_zero():
            continue
        scale = eval_norm(Lp(2.0), apply_SI(SQRT, g))
        best = max(best, math.sqrt(r) * rearrange(g)(r) / scale)
    assert est(StepFunction.indicator(0.0, r)) == pytest.approx(best + r, rel=1e-12)


@given(step_functions())
def test_theorem11_monotone_in_corpus(f):
    small = gen_corpus(11, 10).members
    large = small + gen_corpus(12, 10).members
    assert theorem11_norm(L2, SQRT, f, small) <= theorem11_norm(L2, SQRT, f, large) + 1e-12


# -- Lorentz-Zygmund classification ---------------------------------------------


def test_glz_subcritical_is_classical_sobolev_target():
    case = glz_equivalent(2.0, 2.0, 0.0, 2.0 / 3.0, 1)
    assert isinstance(case, GLZCase) and case.branch == "i"
    assert case.norm.p == pytest.approx(6.0, rel=1e-12)
    assert case.norm.q == 2.0
    assert case.critical_p == pytest.approx(3.0, rel=1e-12)


def test_glz_critical_branches():
    ii = glz_equivalent(3.0, 2.0, 0.0, 2.0 / 3.0, 1)
    assert ii.branch == "ii"
    assert ii.norm.spec() == LorentzZygmund(math.inf, 2.0, -1.0).spec()
    iii = glz_equivalent(3.0, 2.0, 0.5, 2.0 / 3.0, 1)
    assert iii.branch == "iii"
    assert iii.norm.spec() == LorentzZygmund(math.inf, 2.0, -0.5, -1.0).spec()
    iv = glz_equivalent(4.0, 2.0, 0.0, 2.0 / 3.0, 1)
    assert iv.branch == "iv" and iv.norm == Lp(math.inf)
    assert glz_equivalent(3.0, 2.0, 1.0, 2.0 / 3.0, 1).branch == "iv"


def test_glz_float_critical_exponent_recognised():
    # 1/(1 - 2/3) is not exactly 3 in floating point
    assert glz_equivalent(1.0 / (1.0 - 2.0 / 3.0), 2.0, 0.0, 2.0 / 3.0, 1).branch == "ii"


def test_glz_rejects_inadmissible():
    with pytest.raises(ValueError):
        glz_equivalent(2.0, 0.5, 0.0, 0.5, 1)
    with pytest.raises(ValueError):
        glz_equivalent(2.0, 2.0, 0.0, 0.5, 2)


@given(st.sampled_from([1.5, 2.0, 3.0, 4.0, 8.0]), st.sampled_from([1.0, 2.0, 4.0, math.inf]),
       st.sampled_from([-1.0, 0.0, 0.25, 0.5, 0.75, 1.0]), st.sampled_from([(0.5, 1), (2 / 3, 1), (0.75, 2)]))
def test_glz_exactly_one_branch(p, q, beta, am):
    alpha, m = am
    try:
        case = glz_equivalent(p, q, beta, alpha, m)
    except ValueError:
        return
    assert case.branch in {"i", "ii", "iii", "iv"}


# -- entry point -----------------------------------------------------------------


def test_optimal_metadata():
    res = optimal("target", L2, J23, StepFunction.indicator(0.0, 0.1))
    assert res.regime == "classQ" and res.warnings == ()
    assert float(res) == res.value


def test_optimal_flags_gaussian_profile():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = optimal("target", L2, product_profile(2.0), StepFunction.indicator(0.0, 0.1))
    assert res.regime != "classQ"
    assert any("class Q" in w for w in res.warnings)
    assert math.isfinite(res.value)


def test_optimal_modes():
    f = StepFunction.indicator(0.0, 0.2)
    assert optimal("target-assoc", Lp(1.0), SQRT, f).value == pytest.approx(math.sqrt(0.2), rel=1e-12)
    assert optimal("domain", Lp(math.inf), SQRT, StepFunction.constant(1.0)).value == pytest.approx(2.0)
    with pytest.raises(ValueError, match="unknown mode"):
        optimal("best", L2, SQRT, f)
    with pytest.warns(Warning):
        res = optimal("target", LorentzZygmund(math.inf, 1.0), SQRT, f, allow_outside=True)
    assert any("quasinorm" in w for w in res.warnings)
