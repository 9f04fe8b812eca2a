import numpy as np
import pytest
from hypothesis import strategies as st

from kickedtomo.trajectory import OscillatorParams

KAPPA = st.floats(-2, 2, allow_nan=False)


@st.composite
def weak_params(draw):
    w0 = draw(st.floats(0.5, 2))
    g = draw(st.floats(0, 0.9)) * w0
    return OscillatorParams(w0, g, draw(KAPPA))


@st.composite
def strong_params(draw):
    w0 = draw(st.floats(0.5, 2))
    g = draw(st.floats(1.1 * w0, 5))
    return OscillatorParams(w0, g, draw(KAPPA))


@st.composite
def free_params(draw):
    return OscillatorParams(0.0, draw(st.floats(0.1, 3)), draw(KAPPA))


any_params = st.one_of(weak_params(), strong_params(), free_params())


def random_params(rng: np.random.Generator, regime: str) -> OscillatorParams:
    """Parameter ranges of the closed-form-versus-oracle acceptance sweep."""
    kappa = rng.uniform(-2, 2)
    if regime == "free":
        return OscillatorParams(0.0, rng.uniform(0.1, 3), kappa)
    w0 = rng.uniform(0.5, 2)
    if regime == "weak":
        return OscillatorParams(w0, rng.uniform(0, 0.9 * w0), kappa)
    return OscillatorParams(w0, rng.uniform(1.1 * w0, 5), kappa)


@pytest.fixture
def rng():
    return np.random.default_rng(20241017)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
