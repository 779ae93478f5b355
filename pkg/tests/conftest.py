import pytest

from geoamp import evolve, make_preset_loop

# independent adaptive-quadrature value at tol 1e-12, frozen
GAMMA_REF = 0.046898519201737085


@pytest.fixture(scope="session")
def ellipse():
    return make_preset_loop("ellipse")


@pytest.fixture(scope="session")
def wobble():
    return make_preset_loop("constant-X-wobble")


@pytest.fixture(scope="session")
def slow_ellipse(ellipse):
    return ellipse.with_period(200.0 / ellipse.omega_min())


@pytest.fixture(scope="session")
def slow_trajectory(slow_ellipse):
    return evolve(slow_ellipse, 0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
