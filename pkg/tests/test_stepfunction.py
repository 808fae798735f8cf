import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import step_functions
from oracles import rearranged_samples, step_integral, values_on
from rispace.evalfunction import maximal_fn, oscillation
from rispace.stepfunction import (
    Rearranged,
    StepFunction,
    dilate,
    distribution,
    hardy_littlewood_sides,
    integrate,
    level_function,
    optimal_decomposition,
    primitive,
    rearrange,
)


# -- construction ------------------------------------------------------------


def test_canonical_form_merges_equal_neighbours():
    f = StepFunction([0.2, 0.4, 0.6], [1.0, 1.0, 2.0, 2.0])
    assert f.breakpoints.tolist() == [0.4]
    assert f.values.tolist() == [1.0, 2.0]


@pytest.mark.parametrize(
    "bps, vals",
    [([0.5, 0.2], [1, 1, 1]), ([0.0], [1, 2]), ([1.0], [1, 2]), ([0.5], [1, -1]), ([0.5], [1, np.inf]), ([0.5], [1])],
)
def test_invalid_inputs_rejected(bps, vals):
    with pytest.raises(ValueError):
        StepFunction(bps, vals)


def test_rearranged_requires_nonincreasing():
    with pytest.raises(ValueError):
        Rearranged([0.5], [1.0, 2.0])


@given(step_functions())
def test_csv_round_trip_is_bit_exact(f):
    g = StepFunction.from_csv(f.to_csv())
    assert np.array_equal(g.edges, f.edges)
    assert np.array_equal(g.values, f.values)


def test_csv_format():
    f = StepFunction([0.25], [1.0, 0.0])
    lines = f.to_csv().strip().splitlines()
    assert lines[0] == "breakpoint,value"
    assert lines[-1].split(",")[0] in ("1.0", "1")
    with pytest.raises(ValueError):
        StepFunction.from_csv("breakpoint,value\n0.5,1\n")


# -- rearrangement -------------------------------------------------------------


def test_rearrange_staircase(staircase):
    fs = rearrange(staircase)
    np.testing.assert_allclose(fs.edges, [0.0, 0.2, 0.7, 1.0], atol=1e-15)
    assert fs.values.tolist() == [3.0, 2.0, 1.0]


def test_rearrange_translates_indicator_left():
    fs = rearrange(StepFunction.indicator(0.5, 0.75))
    assert fs == StepFunction.indicator(0.0, 0.25)


def test_rearrange_identity_on_nonincreasing():
    f = StepFunction([0.3, 0.6], [5.0, 2.0, 0.5])
    assert rearrange(f) == f


@given(step_functions())
def test_rearrange_involution(f):
    fs = rearrange(f)
    assert rearrange(fs) == fs
    assert fs.is_nonincreasing()


@given(step_functions())
def test_rearrange_matches_sorted_samples(f):
    t, ref = rearranged_samples(f, 20_001)
    fs = rearrange(f)
    # sampling error is confined to cells straddling a breakpoint
    mismatch = np.mean(np.abs(fs(t) - ref) > 1e-12)
    assert mismatch <= 2 * f.n_pieces / 20_001 + 1e-12


@given(step_functions(), st.floats(0.0, 12.0))
def test_equimeasurable(f, level):
    assert distribution(f, level) == pytest.approx(distribution(rearrange(f), level), abs=1e-12)


def test_distribution_examples(staircase):
    chi = StepFunction.indicator(0.0, 0.25)
    assert distribution(chi, 0.5) == 0.25
    assert distribution(chi, 1.0) == 0.0
    assert distribution(staircase, 1.5) == pytest.approx(0.7, abs=1e-15)
    with pytest.raises(ValueError):
        distribution(chi, -0.1)


@given(step_functions(), step_functions())
def test_hardy_littlewood(f, g):
    lhs, rhs = hardy_littlewood_sides(f, g)
    assert lhs <= rhs + 1e-12 * max(1.0, rhs)


@given(step_functions(), step_functions(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_rearrangement_weak_subadditive(f, g, a, b):
    t1, t2 = a, b * (1.0 - a)
    lhs = rearrange(f + g)(t1 + t2)
    assert lhs <= rearrange(f)(t1) + rearrange(g)(t2) + 1e-12


# -- maximal function ------------------------------------------------------


def test_maximal_indicator():
    ff = maximal_fn(StepFunction.indicator(0.0, 0.5))
    np.testing.assert_allclose(ff(np.array([0.1, 0.5, 0.8])), [1.0, 1.0, 0.5 / 0.8], rtol=1e-15)
    assert maximal_fn(StepFunction.constant(1.0))(0.3) == 1.0


def test_maximal_staircase(staircase):
    # f* = 3 on (0,0.2), 2 on (0.2,0.7): (0.6 + 0.6) / 0.5
    assert maximal_fn(staircase)(0.5) == pytest.approx(2.4, rel=1e-15)


@given(step_functions())
def test_maximal_dominates_rearrangement(f):
    t = np.geomspace(1e-6, 1 - 1e-9, 300)
    assert np.all(maximal_fn(f)(t) >= rearrange(f)(t) - 1e-12)


@given(step_functions(), step_functions())
def test_maximal_subadditive(f, g):
    t = np.unique(np.concatenate((np.geomspace(1e-6, 1 - 1e-9, 200), f.edges[1:-1], g.edges[1:-1])))
    lhs = maximal_fn(f + g)(t)
    rhs = maximal_fn(f)(t) + maximal_fn(g)(t)
    assert np.all(lhs <= rhs + 1e-12 * np.maximum(1.0, rhs))


def test_oscillation_examples():
    assert oscillation(StepFunction.constant(2.0))(0.4) == 0.0
    assert oscillation(StepFunction.indicator(0.0, 0.5))(0.75) == pytest.approx(2.0 / 3.0, rel=1e-15)


# -- dilation, integration, decomposition ------------------------------------


def test_dilate_examples():
    chi = StepFunction.indicator(0.0, 0.5)
    assert dilate(chi, 2.0) == StepFunction.constant(1.0)
    assert dilate(chi, 0.5) == StepFunction.indicator(0.0, 0.25)
    assert dilate(chi, 1.0) == chi


def test_integrate_examples(staircase):
    assert integrate(StepFunction.indicator(0.0, 0.5)) == 0.5
    # 3*0.2 + 1*0.3 + 2*0.5
    assert integrate(staircase) == pytest.approx(1.9, rel=1e-15)
    assert integrate(staircase) == pytest.approx(step_integral(staircase, 0.0, 1.0), rel=1e-12)
    assert integrate(staircase, 0.3, 0.3) == 0.0
    with pytest.raises(ValueError):
        integrate(staircase, 0.6, 0.2)


@given(step_functions(), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_integrate_matches_quadrature(f, a, b):
    a, b = min(a, b), max(a, b)
    assert integrate(f, a, b) == pytest.approx(step_integral(f, a, b), rel=1e-9, abs=1e-12)


def test_optimal_decomposition_examples():
    chi = StepFunction.indicator(0.0, 0.5)
    f0, f1 = optimal_decomposition(chi, 0.7)
    assert f0.is_zero() and f1 == chi
    f = StepFunction([0.3, 0.6], [2.0, 1.0, 0.0])
    f0, f1 = optimal_decomposition(f, 0.5)
    assert f0 == StepFunction.indicator(0.0, 0.6)
    assert f1 == StepFunction.indicator(0.0, 0.3)
    c = StepFunction.constant(1.5)
    f0, f1 = optimal_decomposition(c, 0.4)
    assert f0 == c and f1.is_zero()


@given(step_functions(), st.floats(0.01, 0.99))
def test_optimal_decomposition_rearrangements(f, t):
    f0, f1 = optimal_decomposition(f, t)
    fs = rearrange(f)
    level = fs(t)
    s = np.linspace(0.0005, 0.9995, 999)
    np.testing.assert_allclose(rearrange(f0)(s), np.minimum(fs(s), level), atol=1e-12)
    expected_f1 = np.where(s < t, np.maximum(fs(s) - level, 0.0), 0.0)
    np.testing.assert_allclose(rearrange(f1)(s), expected_f1, atol=1e-12)
    np.testing.assert_allclose(rearrange(f0)(s) + rearrange(f1)(s), fs(s), atol=1e-12)


# -- level function ----------------------------------------------------------


def test_level_function_examples():
    assert level_function(StepFunction.indicator(0.5, 1.0)) == StepFunction.constant(0.5)
    f = StepFunction([0.3, 0.6], [5.0, 2.0, 0.5])
    fo = level_function(f)
    np.testing.assert_allclose(fo.edges, f.edges, rtol=1e-15)
    np.testing.assert_allclose(fo.values, f.values, rtol=1e-14)
    g = StepFunction([0.25, 0.5], [1.0, 3.0, 0.0])
    fo = level_function(g)
    assert fo.values.tolist() == [2.0, 0.0]
    assert fo.breakpoints.tolist() == [0.5]


@given(step_functions())
def test_level_function_chain(f):
    fo, fs = level_function(f), rearrange(f)
    t = np.unique(np.concatenate((f.edges, fo.edges, fs.edges, np.linspace(0, 1, 51))))
    pf, po, ps = primitive(f, t), primitive(fo, t), primitive(fs, t)
    scale = max(1.0, ps[-1])
    assert np.all(pf <= po + 1e-12 * scale)
    assert np.all(po <= ps + 1e-12 * scale)
    assert fo.is_nonincreasing()
    assert integrate(fo) == pytest.approx(integrate(f), rel=1e-12, abs=1e-15)


def test_level_function_first_slope_is_best_average():
    # the first hull slope is sup_x F(x)/x, found here by dense sampling of the primitive
    f = StepFunction([0.1, 0.35, 0.5, 0.8], [0.5, 2.0, 0.0, 4.0, 1.0])
    t, v = values_on(f, 40_000)
    x = t + 0.5 / t.size
    best = np.max(np.cumsum(v) / t.size / x)
    assert level_function(f).values[0] == pytest.approx(best, rel=1e-3)
