import math

import pytest

from conslaw_contour import SolverConfig, make_problem

TWO_PI = 2 * math.pi

FLUXES = {
    "transport": {"a": 2.0},
    "burgers": {},
    "cubic": {},
    "buckley_leverett": {"M": 1.0},
    "lwr_traffic": {"v": 1.0, "K": 2.0},
}
INITIALS = {
    "sine": {},
    "gaussian": {"a": 1.0, "s": 1.0},
    "lorentzian": {"a": 1.0},
    "polynomial": {"coeffs": [0.1, 0.5, -0.2]},
}


def fixed_point(fn, y0, tol=1e-15, max_iter=10_000):
    """Plain fixed-point iteration y <- fn(y); oracle for implicit relations."""
    y = y0
    for _ in range(max_iter):
        y_new = fn(y)
        if abs(y_new - y) <= tol * (1 + abs(y)):
            return y_new
        y = y_new
    raise RuntimeError("fixed point did not converge")


def newton_foot(x, t, c0, dc0, X0=None):
    """Foot of the characteristic by undamped Newton; oracle independent of the package solver."""
    X = x if X0 is None else X0
    for _ in range(200):
        step = (X - x + t * c0(X)) / (1 + t * dc0(X))
        X -= step
        if abs(step) < 1e-16:
            break
    return X


@pytest.fixture
def burgers_sine():
    return make_problem("burgers", "sine", (0.0, TWO_PI))


@pytest.fixture
def config():
    return SolverConfig()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
