import math

import pytest

from rispace.norms import BigM, DownDualVia, LambdaI, LorentzZygmund, Lp, SmallM, WeakL1, ZNorm
from rispace.profiles import LogProfile, PowerProfile, ProductProfile, TabulatedProfile
from rispace.specs import SpecError, parse_norm, parse_profile


@pytest.mark.parametrize(
    "text, alpha",
    [("power(0.5)", 0.5), ("power(2/3)", 2 / 3), ("john(3,1)", 2 / 3), ("mazya(0.75,2)", 0.5), ("linear", 1.0),
     ("tilde(power(0.25))", 0.75), ("  power(0.5)  ", 0.5)],
)
def test_power_like_profiles(text, alpha):
    I = parse_profile(text)
    assert isinstance(I, PowerProfile)
    assert I.alpha == pytest.approx(alpha, rel=1e-15)


def test_named_profiles(tmp_path):
    assert isinstance(parse_profile("gauss"), ProductProfile)
    assert isinstance(parse_profile("product(1.5)"), ProductProfile)
    assert isinstance(parse_profile("log"), LogProfile)
    path = tmp_path / "p.csv"
    path.write_text("t,I\n0.01,0.1\n0.25,0.5\n1.0,1.0\n")
    assert isinstance(parse_profile(f"tab:{path}"), TabulatedProfile)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("Lp:2", Lp(2.0)),
        ("Lp:inf", Lp(math.inf)),
        ("LZ:6,2", LorentzZygmund(6.0, 2.0)),
        ("LZ:6,2,0,0", LorentzZygmund(6.0, 2.0, 0.0, 0.0)),
        ("LZ:inf,2,-1", LorentzZygmund(math.inf, 2.0, -1.0)),
        ("WeakL1", WeakL1()),
    ],
)
def test_simple_norms(text, expected):
    assert parse_norm(text) == expected


def test_profile_norms():
    assert isinstance(parse_norm("Lambda:power(0.5)"), LambdaI)
    assert isinstance(parse_norm("mI:power(0.5)"), SmallM)
    assert isinstance(parse_norm("MI:gauss"), BigM)
    Z = parse_norm("Z:Lp:2@power(0.5)")
    assert isinstance(Z, ZNorm) and Z.base == Lp(2.0) and Z.I.alpha == 0.5
    D = parse_norm("Down:Lp:2")
    assert isinstance(D, DownDualVia) and D.base == Lp(2.0)


@pytest.mark.parametrize("text", ["Lp:2", "LZ:6,2,0,0", "Lambda:power(0.5)", "mI:power(0.5)", "Z:Lp:2@power(0.5)",
                                  "WeakL1", "LZ:inf,2,-1,0"])
def test_spec_round_trip(text):
    N = parse_norm(text)
    assert parse_norm(N.spec()).spec() == N.spec()


@pytest.mark.parametrize(
    "text, position",
    [("Lp:", 3), ("Lp:2x", 4), ("Lq:2", 0), ("LZ:6", 3), ("Lp:0.5", 3), ("Z:Lp:2", 6), ("mI:power(", 9)],
)
def test_norm_errors_carry_position(text, position):
    with pytest.raises(SpecError) as info:
        parse_norm(text)
    assert info.value.position == position
    assert "^" in str(info.value)


@pytest.mark.parametrize("text", ["power(1.5)", "power(0.5", "cubic(1)", "john(3,3)", "tab:/no/such/file.csv", ""])
def test_profile_errors(text):
    with pytest.raises(SpecError):
        parse_profile(text)
