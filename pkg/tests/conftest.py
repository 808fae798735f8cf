import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rispace.stepfunction import StepFunction

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def step_functions(draw, max_pieces: int = 8, max_value: float = 10.0, min_gap: float = 1e-3):
    """Canonical nonnegative step functions on (0,1) with well separated breakpoints."""
    n = draw(st.integers(1, max_pieces))
    raw = draw(st.lists(st.floats(min_gap, 1.0 - min_gap), min_size=n - 1, max_size=n - 1))
    bps = []
    for x in sorted(raw):
        if not bps or x - bps[-1] >= min_gap:
            bps.append(x)
    if bps and 1.0 - bps[-1] < min_gap:
        bps.pop()
    vals = draw(
        st.lists(
            st.one_of(st.just(0.0), st.floats(0.01, max_value)),
            min_size=len(bps) + 1,
            max_size=len(bps) + 1,
        )
    )
    if not any(v > 0 for v in vals):
        vals[0] = 1.0
    return StepFunction(bps, vals)


@pytest.fixture
def staircase():
    """3 on (0,0.2), 1 on (0.2,0.5), 2 on (0.5,1)."""
    return StepFunction([0.2, 0.5], [3.0, 1.0, 2.0])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
