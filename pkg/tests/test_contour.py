import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TWO_PI, newton_foot
from conslaw_contour import (
    Contour,
    EvaluationError,
    NoAdmissibleContour,
    SolverConfig,
    count_poles,
    integrate,
    make_problem,
    select_radius,
)
from conslaw_contour.contour import admissibility, foot_is_unique, residue_mean, strict_margin
from conslaw_contour.solver import evaluate_on


def test_contour_validation():
    with pytest.raises(ValueError):
        Contour(0.0, 1.0, 7)
    with pytest.raises(ValueError):
        Contour(0.0, 1.0, 6)
    with pytest.raises(ValueError):
        Contour(0.0, -1.0, 8)
    with pytest.raises(ValueError):
        Contour(0.0, math.inf, 8)


def test_nodes_lie_on_circle():
    z, w = Contour(0.3, 0.7, 16).points()
    np.testing.assert_allclose(np.abs(z - 0.3), 0.7)
    assert z[0] == pytest.approx(1.0)


@pytest.mark.parametrize("x,R", [(0.0, 1.0), (2.5, 0.1), (-1.0, 3.0)])
def test_simple_pole(x, R):
    val = integrate(Contour(x, R, 32), lambda z: 1 / (z - x))
    assert val == pytest.approx(2j * math.pi, abs=1e-13)


def test_entire_integrand_vanishes():
    assert abs(integrate(Contour(0.4, 1.3, 32), lambda z: np.ones_like(z))) < 1e-14


def test_second_derivative_of_square():
    # residue formula with F = z^2, n = 2: oint z^2/(z-1)^3 dz = 2 pi i F''(1) / 2! = 2 pi i
    val = integrate(Contour(1.0, 0.5, 64), lambda z: z**2 / (z - 1) ** 3)
    assert val == pytest.approx(2j * math.pi, abs=1e-12)
    assert (math.factorial(2) / (2j * math.pi) * val).real == pytest.approx(2.0, abs=1e-12)


def test_integrand_failure_is_evaluation_error():
    with pytest.raises(EvaluationError):
        integrate(Contour(0.0, 1.0, 8), lambda z: 1 / (z - 1.0))
    with pytest.raises(EvaluationError):
        integrate(Contour(0.0, 1.0, 8), lambda z: np.full(z.shape, np.nan))


@settings(max_examples=40, deadline=None)
@given(
    a=st.complex_numbers(max_magnitude=10, allow_nan=False),
    b=st.complex_numbers(max_magnitude=10, allow_nan=False),
    x=st.floats(-3, 3),
    R=st.floats(0.1, 2),
)
def test_integrate_is_linear(a, b, x, R):
    c = Contour(x, R, 64)
    g = lambda z: np.exp(z) / (z - x)
    h = lambda z: np.sin(z) ** 2 / (z - x) ** 2
    lhs = integrate(c, lambda z: a * g(z) + b * h(z))
    rhs = a * integrate(c, g) + b * integrate(c, h)
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(lhs))


def test_stacked_integrands_share_nodes():
    c = Contour(0.0, 1.0, 32)
    vals = residue_mean(c, lambda z: np.stack([np.exp(z) / z, np.cos(z) / z]))
    np.testing.assert_allclose(vals, [1.0, 1.0], atol=1e-14)


# ---------------------------------------------------------------------------
# radius selection
# ---------------------------------------------------------------------------


def test_transport_margin_is_r_minus_one():
    p = make_problem("transport", "gaussian", (-5, 5), {"a": 2.0})
    c = select_radius(0.0, 0.5, p, SolverConfig())
    assert c.radius > 1
    assert c.report.mode == "strict"
    assert c.report.margin == pytest.approx(c.radius - 1.0, abs=1e-12)
    assert c.report.margin >= 0.05 * c.radius


def test_initial_time_always_admissible(burgers_sine):
    for x in np.linspace(0, TWO_PI, 41):
        c = select_radius(float(x), 0.0, burgers_sine)
        assert c.report.ok and c.report.mode == "initial"


def test_past_breaking_has_no_contour(burgers_sine):
    # oracle: for every radius in (0, 3] some ring node violates |z - x| > |t c(u0(z))|
    x, t = math.pi, 1.5
    for R in np.linspace(1e-3, 3.0, 600):
        z = x + R * np.exp(2j * np.pi * np.arange(256) / 256)
        assert np.any(np.abs(z - x) <= np.abs(t * np.sin(z)))
    with pytest.raises(NoAdmissibleContour) as info:
        select_radius(x, t, burgers_sine)
    assert info.value.best_margin < 0
    assert info.value.reason == "multiple_feet"


def test_strict_condition_impossible_but_certified(burgers_sine):
    # at x = pi/2, t = 0.8 every point iy on the imaginary line through x has
    # |iy| <= 0.8 cosh(y) = |t c(u0(x + iy))|, so no Jordan curve around x meets
    # the strict inequality; the certified contour must take over
    y = np.linspace(-20, 20, 4001)
    assert np.all(np.abs(y) <= 0.8 * np.cosh(y))
    x, t = math.pi / 2, 0.8
    c = select_radius(x, t, burgers_sine)
    assert c.report.mode == "certified"
    assert c.report.margin < 0
    assert c.report.ok
    assert abs(count_poles(c.with_nodes(512), x, t, burgers_sine) - 1) < 1e-6


def test_strict_only_config_refuses(burgers_sine):
    with pytest.raises(NoAdmissibleContour):
        select_radius(math.pi / 2, 0.8, burgers_sine, SolverConfig(certify=False))


def test_foot_uniqueness_check(burgers_sine):
    assert foot_is_unique(0.0, 1.2, burgers_sine)
    assert not foot_is_unique(math.pi, 1.2, burgers_sine)
    assert foot_is_unique(math.pi, 0.99, burgers_sine)


def test_lorentzian_radius_respects_pole():
    p = make_problem("burgers", "lorentzian", (-3, 3))
    for x in (-2.0, 0.0, 0.5):
        c = select_radius(x, 0.3, p)
        assert c.radius < math.hypot(x, 1.0)
        assert c.report.rho_slack > 0


def test_buckley_leverett_radius_keeps_flux_analytic():
    p = make_problem("buckley_leverett", "sine", (0, TWO_PI), {"M": 1.0})
    c = select_radius(1.0, 0.1, p)
    z, _ = c.with_nodes(512).points()
    u0x = p.u0.eval(1.0)
    assert np.max(np.abs(p.u0.eval(z) - u0x)) < p.flux.c.rho(u0x)


def test_admissibility_report_invariant(burgers_sine):
    c = Contour(1.0, 0.8, 128)
    rep = admissibility(c, 0.5, burgers_sine)
    assert rep.strict_ok == (rep.margin > 0 and rep.rho_slack > 0)
    assert rep.margin == pytest.approx(strict_margin(1.0, 0.5, burgers_sine, 0.8), abs=1e-12)


# ---------------------------------------------------------------------------
# pole counting
# ---------------------------------------------------------------------------


def test_count_poles_at_t0_is_one(burgers_sine):
    assert count_poles(Contour(1.0, 0.3, 16), 1.0, 0.0, burgers_sine) == pytest.approx(1.0, abs=1e-15)


def test_count_poles_benchmark(burgers_sine):
    x, t = 1.0, 0.5
    c = select_radius(x, t, burgers_sine).with_nodes(256)
    assert abs(count_poles(c, x, t, burgers_sine) - 1) < 1e-6
    X = newton_foot(x, t, math.sin, math.cos)
    assert abs(X - x + t * math.sin(X)) < 1e-14
    assert abs(X - x) < c.radius


def test_count_poles_zero_when_pole_outside(burgers_sine):
    x, t = 1.0, 0.5
    X = newton_foot(x, t, math.sin, math.cos)
    tiny = Contour(x, 0.25 * abs(X - x), 64)
    assert abs(count_poles(tiny, x, t, burgers_sine)) < 1e-6


# ---------------------------------------------------------------------------
# quadrature behaviour
# ---------------------------------------------------------------------------


def test_radius_independence(burgers_sine):
    x, t = 1.0, 0.3
    r1, r2 = 0.5, 0.8
    for r in (r1, r2):
        assert strict_margin(x, t, burgers_sine, r) >= 0.05 * r
    v1 = evaluate_on(Contour(x, r1, 512), x, t, burgers_sine)
    v2 = evaluate_on(Contour(x, r2, 512), x, t, burgers_sine)
    for key in ("u", "celerity", "ux", "ut"):
        assert abs(v1[key] - v2[key]) <= 1e-9 * max(1.0, abs(v1[key]))


def test_spectral_convergence(burgers_sine):
    x, t = 1.0, 0.5
    ref = math.sin(newton_foot(x, t, math.sin, math.cos))
    c = select_radius(x, t, burgers_sine)
    errs = [abs(evaluate_on(c.with_nodes(n), x, t, burgers_sine)["u"].real - ref) for n in (16, 32, 64, 128, 256)]
    assert errs[4] <= errs[2]
    logs = np.log10(np.maximum(errs, 1e-16))
    # geometric decay: each doubling gains at least as many digits as the previous one until round-off
    assert all(b < a for a, b in zip(logs[:3], logs[1:4]))
    assert errs[3] < 1e-13


@pytest.mark.parametrize("flux,initial,dom", [("burgers", "lorentzian", (-4, 4)), ("buckley_leverett", "gaussian", (-4, 4))])
def test_initial_radius_is_middle_of_admissible_prefix(flux, initial, dom):
    # oracle: exhaustive scan of the radius grid, then the middle admissible entry
    from conslaw_contour.contour import _analytic_radius, _probe

    p = make_problem(flux, initial, dom)
    cfg = SolverConfig()
    for x in np.linspace(*dom, 9):
        x = float(x)
        r_hi = _analytic_radius(x, p, cfg)
        ok = []
        for r in np.geomspace(cfg.min_radius_fraction * r_hi, r_hi, cfg.radius_scan_points):
            try:
                rep = _probe(x, 0.0, float(r), p, cfg, r_hi, False)
            except EvaluationError:
                continue
            if rep.rho_slack > 0 and rep.growth <= cfg.max_growth:
                ok.append(float(r))
        assert select_radius(x, 0.0, p, cfg).radius == ok[len(ok) // 2]
