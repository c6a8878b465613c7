import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import FLUXES, INITIALS
from conslaw_contour import (
    AnalyticFn,
    EvaluationError,
    InvalidParam,
    Problem,
    UnknownFlux,
    UnknownInitial,
    make_flux,
    make_initial,
)

H = 1e-5
# Buckley-Leverett derivatives are steep near u = 0.5 +- 0.5i; keep u within the physical range there
FLUX_SAMPLE_RANGE = {"buckley_leverett": (-0.3, 1.3)}


def fd(fn, x):
    return (fn(x + H) - fn(x - H)) / (2 * H)


def all_entries():
    for name, params in FLUXES.items():
        flux = make_flux(name, **params)
        lo, hi = FLUX_SAMPLE_RANGE.get(name, (-2.0, 2.0))
        yield f"{name}.c", flux.c, lo, hi
        yield f"{name}.c_prime", flux.c_prime, lo, hi
        yield f"{name}.f", flux.f, lo, hi
    for name, params in INITIALS.items():
        yield name, make_initial(name, **params), -4.0, 4.0
    yield "constant", make_initial("constant", b=0.3), -4.0, 4.0


ENTRIES = list(all_entries())


@pytest.mark.parametrize("label,fn,lo,hi", ENTRIES, ids=[e[0] for e in ENTRIES])
def test_derivative_matches_central_difference(label, fn, lo, hi):
    rng = np.random.default_rng(12345)
    xs = rng.uniform(lo, hi, 100)
    d = fn.deriv(xs)
    err = np.abs(d - fd(fn.eval, xs)) / (1 + np.abs(d))
    assert err.max() < 1e-6


@pytest.mark.parametrize("label,fn,lo,hi", ENTRIES, ids=[e[0] for e in ENTRIES])
def test_real_in_real_out(label, fn, lo, hi):
    xs = np.linspace(lo, hi, 50)
    assert not np.iscomplexobj(fn.eval(xs))
    assert isinstance(fn.eval(0.25), float)
    assert np.all(fn.rho(xs) > 0)


@pytest.mark.parametrize("name", sorted(FLUXES))
def test_flux_chain_consistency(name):
    flux = make_flux(name, **FLUXES[name])
    lo, hi = FLUX_SAMPLE_RANGE.get(name, (-2.0, 2.0))
    us = np.linspace(lo, hi, 41)
    np.testing.assert_allclose(flux.c.eval(us), fd(flux.f.eval, us), rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(flux.c_prime.eval(us), fd(flux.c.eval, us), rtol=1e-6, atol=1e-8)


def test_flux_examples():
    assert make_flux("burgers").c.eval(0.7) == 0.7
    c = make_flux("transport", a=2).c
    assert c.eval(0.3) == 2.0
    assert c.eval(1.5 + 2.0j) == 2.0
    assert make_flux("buckley_leverett", M=1).f.eval(0.5) == pytest.approx(0.5, abs=1e-15)


def test_initial_examples():
    assert make_initial("sine", a=1, k=1, phi=0, b=0).eval(math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert make_initial("lorentzian", a=1).rho(0.0) == 1.0
    assert make_initial("gaussian", a=1, s=1).deriv(1.0) == pytest.approx(-2 * math.exp(-1), rel=1e-14)


def test_lorentzian_pole_raises():
    u0 = make_initial("lorentzian")
    mags = [abs(u0.eval(1j * y)) for y in (0.9, 0.99, 0.999)]
    assert mags[0] < mags[1] < mags[2]
    with pytest.raises(EvaluationError):
        u0.eval(1j)
    with pytest.raises(EvaluationError):
        u0.eval(np.array([0.0, -1j]))


def test_buckley_leverett_rho_is_pole_distance():
    c = make_flux("buckley_leverett", M=1.0).c
    assert c.rho(0.5) == pytest.approx(0.5)
    with pytest.raises(EvaluationError):
        c.eval(0.5 + 0.5j)


@pytest.mark.parametrize(
    "call",
    [
        lambda: make_flux("buckley_leverett", M=0),
        lambda: make_flux("buckley_leverett", M=-1),
        lambda: make_flux("lwr_traffic", K=0),
        lambda: make_flux("burgers", a=1),
        lambda: make_initial("gaussian", s=0),
        lambda: make_initial("polynomial", coeffs=[]),
        lambda: make_initial("sine", a="x"),
    ],
)
def test_invalid_params(call):
    with pytest.raises(InvalidParam):
        call()


def test_unknown_names():
    with pytest.raises(UnknownFlux):
        make_flux("euler")
    with pytest.raises(UnknownInitial):
        make_initial("square_wave")


def test_problem_domain_validated():
    with pytest.raises(InvalidParam):
        Problem(make_flux("burgers"), make_initial("sine"), (1.0, 1.0))


def test_user_function_cauchy_fallback():
    fn = AnalyticFn.from_callable(np.cosh, rho=math.inf)
    xs = np.linspace(-1, 1, 7)
    np.testing.assert_allclose(fn.deriv(xs), np.sinh(xs), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(a=st.floats(-3, 3), k=st.floats(0.1, 3), phi=st.floats(-3, 3), x=st.floats(-10, 10))
def test_sine_family_derivative(a, k, phi, x):
    u0 = make_initial("sine", a=a, k=k, phi=phi)
    d = u0.deriv(x)
    assert abs(d - fd(u0.eval, x)) / (1 + abs(d)) < 1e-6


def test_evaluation_is_pure_under_threads():
    from concurrent.futures import ThreadPoolExecutor

    u0 = make_initial("gaussian")
    zs = [complex(i / 10, 0.3) for i in range(200)]
    serial = [u0.eval(z) for z in zs]
    with ThreadPoolExecutor(8) as pool:
        assert list(pool.map(u0.eval, zs)) == serial
