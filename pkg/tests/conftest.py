import numpy as np
import pytest
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        _CRITERIA.append((marker.args[0], rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")


def random_density(rng, dim=4, rank=None):
    rank = dim if rank is None else rank
    a = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure(rng, dim=4):
    return random_density(rng, dim, rank=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_entries = st.floats(-1, 1, allow_nan=False, allow_infinity=False)


@st.composite
def density_matrices(draw, dim=4):
    """Hypothesis strategy: normalized dim x dim density matrices."""
    re = draw(hnp.arrays(float, (dim, dim), elements=_entries))
    im = draw(hnp.arrays(float, (dim, dim), elements=_entries))
    a = re + 1j * im + 1e-3 * np.eye(dim)
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@st.composite
def hermitian_matrices(draw, dim):
    re = draw(hnp.arrays(float, (dim, dim), elements=_entries))
    im = draw(hnp.arrays(float, (dim, dim), elements=_entries))
    a = re + 1j * im
    return (a + a.conj().T) / 2


omegas = st.floats(0.05, 3.0)
kds = st.floats(0.05, 3 * np.pi)
