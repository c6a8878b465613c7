"""Analytic functions of one complex variable and the flux / initial-data catalogue.

Every entry carries a closed-form derivative and a lower bound ``rho(x)`` on the
distance from a real point to the nearest singularity, which is what contour
admissibility is checked against.

Usage:
    flux = make_flux("burgers")
    u0 = make_initial("sine", a=1.0, k=1.0)
    problem = Problem(flux, u0, domain=(0.0, 2 * math.pi))
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import EvaluationError, InvalidParam, UnknownFlux, UnknownInitial

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _unwrap(value: np.ndarray, scalar: bool):
    if scalar:
        value = value[()]
        return complex(value) if np.iscomplexobj(value) else float(value)
    return value


def _apply(fn: ArrayFn, z, what: str):
    arr = np.asarray(z)
    scalar = arr.ndim == 0
    try:
        with np.errstate(all="ignore"):
            out = np.asarray(fn(arr))
    except (ZeroDivisionError, FloatingPointError, OverflowError, ValueError) as exc:
        raise EvaluationError(f"{what} failed: {exc}") from exc
    if out.shape != arr.shape:
        out = np.broadcast_to(out, arr.shape).copy()
    if not np.all(np.isfinite(out)):
        raise EvaluationError(f"{what} produced a non-finite value")
    return _unwrap(out, scalar)


@dataclass(frozen=True)
class AnalyticFn:
    """A scalar function evaluable at complex points.

    ``func`` and ``dfunc`` must accept numpy arrays (real or complex) and be
    real on real input. ``rho_fn`` returns a lower bound on the distance from
    a real point to the nearest singularity (``inf`` for entire functions).
    """

    func: ArrayFn
    dfunc: ArrayFn
    rho_fn: Callable[[np.ndarray], np.ndarray]
    name: str = "anonymous"
    params: Mapping[str, object] = field(default_factory=dict)

    def eval(self, z):
        return _apply(self.func, z, f"{self.name}.eval")

    def deriv(self, z):
        return _apply(self.dfunc, z, f"{self.name}.deriv")

    def rho(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.broadcast_to(np.asarray(self.rho_fn(arr), dtype=float), arr.shape)
        return float(out[()]) if arr.ndim == 0 else out.copy()

    __call__ = eval

    @classmethod
    def from_callable(
        cls,
        func: ArrayFn,
        rho: float | Callable[[np.ndarray], np.ndarray],
        deriv: ArrayFn | None = None,
        name: str = "user",
        nodes: int = 64,
    ) -> "AnalyticFn":
        """Wrap a user function.

        ``rho`` may be a constant (a conservative bound is fine). Without
        ``deriv`` the derivative is computed by the Cauchy integral on a circle
        of radius ``min(1, rho(x) / 2)`` with ``nodes`` points.
        """
        rho_fn = rho if callable(rho) else (lambda x, _r=float(rho): np.full(np.shape(x), _r))
        if deriv is None:
            w = np.exp(2j * np.pi * np.arange(nodes) / nodes)

            def deriv(z):
                z = np.asarray(z)
                r = np.minimum(1.0, 0.5 * np.asarray(rho_fn(np.real(z)), dtype=float))
                pts = z[..., None] + r[..., None] * w
                vals = np.asarray(func(pts))
                d = np.mean(vals / w, axis=-1) / r
                return d.real if not np.iscomplexobj(z) else d

        return cls(func, deriv, rho_fn, name)


def _entire(x):
    return np.full(np.shape(x), np.inf)


def _const(value):
    return lambda z: np.full(np.shape(z), value, dtype=complex if np.iscomplexobj(z) else float)


@dataclass(frozen=True)
class FluxSpec:
    f: AnalyticFn
    c: AnalyticFn
    c_prime: AnalyticFn
    name: str
    params: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class Problem:
    """One initial value problem u_t + f(u)_x = 0, u(x, 0) = u0(x)."""

    flux: FluxSpec
    u0: AnalyticFn
    domain: tuple[float, float] = (0.0, 2.0 * math.pi)

    def __post_init__(self):
        lo, hi = self.domain
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise InvalidParam(f"domain must be a finite interval with x_min < x_max, got {self.domain}")

    def celerity0(self, z):
        """c(u0(z)), evaluated lazily at the given points."""
        return self.flux.c.eval(self.u0.eval(z))

    def celerity0_slope(self, x):
        """d/dx c(u0(x)) by the chain rule."""
        return self.flux.c_prime.eval(self.u0.eval(x)) * self.u0.deriv(x)

    def celerity_range(self, samples: int = 2049) -> tuple[float, float]:
        """Sampled (min, max) of c(u0(x)) over the domain."""
        c = self.celerity0(np.linspace(self.domain[0], self.domain[1], samples))
        return float(np.min(c)), float(np.max(c))


def _check_params(family: str, given: Mapping[str, object], allowed: Mapping[str, object]) -> dict:
    unknown = set(given) - set(allowed)
    if unknown:
        raise InvalidParam(f"{family}: unknown parameter(s) {sorted(unknown)}; allowed {sorted(allowed)}")
    out = dict(allowed)
    out.update(given)
    for key, value in out.items():
        if key == "coeffs":
            continue
        try:
            out[key] = float(value)
        except (TypeError, ValueError) as exc:
            raise InvalidParam(f"{family}: parameter {key!r} must be a real number") from exc
        if not math.isfinite(out[key]):
            raise InvalidParam(f"{family}: parameter {key!r} must be finite")
    return out


# ---------------------------------------------------------------------------
# fluxes
# ---------------------------------------------------------------------------


def _transport(a):
    f = AnalyticFn(lambda u: a * u, _const(a), _entire, "transport.f")
    c = AnalyticFn(_const(a), _const(0.0), _entire, "transport.c")
    cp = AnalyticFn(_const(0.0), _const(0.0), _entire, "transport.c_prime")
    return f, c, cp


def _burgers():
    f = AnalyticFn(lambda u: 0.5 * u * u, lambda u: u, _entire, "burgers.f")
    c = AnalyticFn(lambda u: u, _const(1.0), _entire, "burgers.c")
    cp = AnalyticFn(_const(1.0), _const(0.0), _entire, "burgers.c_prime")
    return f, c, cp


def _cubic():
    f = AnalyticFn(lambda u: u**3 / 3.0, lambda u: u * u, _entire, "cubic.f")
    c = AnalyticFn(lambda u: u * u, lambda u: 2.0 * u, _entire, "cubic.c")
    cp = AnalyticFn(lambda u: 2.0 * u, _const(2.0), _entire, "cubic.c_prime")
    return f, c, cp


def _buckley_leverett(M):
    # D(u) = u^2 + M (1-u)^2 vanishes at u = (M +- i sqrt(M)) / (1 + M)
    pole = complex(M, math.sqrt(M)) / (1.0 + M)

    def rho(u):
        return np.abs(np.asarray(u) - pole)

    def D(u):
        return u * u + M * (1.0 - u) ** 2

    def dD(u):
        return 2.0 * u - 2.0 * M * (1.0 - u)

    def c(u):
        return 2.0 * M * u * (1.0 - u) / D(u) ** 2

    def cp(u):
        d = D(u)
        return (2.0 * M * (1.0 - 2.0 * u) * d - 4.0 * M * u * (1.0 - u) * dD(u)) / d**3

    def cpp(u):
        d, d1 = D(u), dD(u)
        n, n1, n2, d2 = 2.0 * M * u * (1.0 - u), 2.0 * M * (1.0 - 2.0 * u), -4.0 * M, 2.0 + 2.0 * M
        return ((n2 * d - n1 * d1 - 2.0 * n * d2) * d - 3.0 * d1 * (n1 * d - 2.0 * n * d1)) / d**4

    f = AnalyticFn(lambda u: u * u / D(u), c, rho, "buckley_leverett.f")
    return f, AnalyticFn(c, cp, rho, "buckley_leverett.c"), AnalyticFn(cp, cpp, rho, "buckley_leverett.c_prime")


def _lwr(v, K):
    f = AnalyticFn(lambda u: v * u * (1.0 - u / K), lambda u: v * (1.0 - 2.0 * u / K), _entire, "lwr_traffic.f")
    c = AnalyticFn(lambda u: v * (1.0 - 2.0 * u / K), _const(-2.0 * v / K), _entire, "lwr_traffic.c")
    cp = AnalyticFn(_const(-2.0 * v / K), _const(0.0), _entire, "lwr_traffic.c_prime")
    return f, c, cp


FLUX_DEFAULTS: dict[str, dict[str, float]] = {
    "transport": {"a": 1.0},
    "burgers": {},
    "cubic": {},
    "buckley_leverett": {"M": 1.0},
    "lwr_traffic": {"v": 1.0, "K": 1.0},
}


def make_flux(name: str, **params) -> FluxSpec:
    """Build a catalogue flux with closed-form f, c = f' and c'."""
    if name not in FLUX_DEFAULTS:
        raise UnknownFlux(f"unknown flux {name!r}; choose from {sorted(FLUX_DEFAULTS)}")
    p = _check_params(name, params, FLUX_DEFAULTS[name])
    if name == "transport":
        parts = _transport(p["a"])
    elif name == "burgers":
        parts = _burgers()
    elif name == "cubic":
        parts = _cubic()
    elif name == "buckley_leverett":
        if p["M"] <= 0:
            raise InvalidParam(f"buckley_leverett: mobility ratio M must be > 0, got {p['M']}")
        parts = _buckley_leverett(p["M"])
    else:
        if p["K"] <= 0:
            raise InvalidParam(f"lwr_traffic: jam density K must be > 0, got {p['K']}")
        parts = _lwr(p["v"], p["K"])
    return FluxSpec(*parts, name=name, params=p)


# ---------------------------------------------------------------------------
# initial conditions
# ---------------------------------------------------------------------------

INITIAL_DEFAULTS: dict[str, dict[str, object]] = {
    "sine": {"a": 1.0, "k": 1.0, "phi": 0.0, "b": 0.0},
    "gaussian": {"a": 1.0, "s": 1.0},
    "lorentzian": {"a": 1.0},
    "polynomial": {"coeffs": [0.0, 1.0]},
    "constant": {"b": 0.0},
}


def make_initial(name: str, **params) -> AnalyticFn:
    """Build a catalogue initial condition.

    ``polynomial`` takes ``coeffs`` in increasing powers of x.
    """
    if name not in INITIAL_DEFAULTS:
        raise UnknownInitial(f"unknown initial condition {name!r}; choose from {sorted(INITIAL_DEFAULTS)}")
    p = _check_params(name, params, INITIAL_DEFAULTS[name])
    if name == "sine":
        a, k, phi, b = p["a"], p["k"], p["phi"], p["b"]
        return AnalyticFn(
            lambda z: a * np.sin(k * z + phi) + b,
            lambda z: a * k * np.cos(k * z + phi),
            _entire,
            "sine",
            p,
        )
    if name == "gaussian":
        a, s = p["a"], p["s"]
        if s <= 0:
            raise InvalidParam(f"gaussian: width s must be > 0, got {s}")
        return AnalyticFn(
            lambda z: a * np.exp(-(z * z) / (s * s)),
            lambda z: -2.0 * a * z / (s * s) * np.exp(-(z * z) / (s * s)),
            _entire,
            "gaussian",
            p,
        )
    if name == "lorentzian":
        a = p["a"]
        return AnalyticFn(
            lambda z: a / (1.0 + z * z),
            lambda z: -2.0 * a * z / (1.0 + z * z) ** 2,
            lambda x: np.hypot(x, 1.0),
            "lorentzian",
            p,
        )
    if name == "polynomial":
        try:
            coeffs = np.array([float(v) for v in p["coeffs"]])
        except (TypeError, ValueError) as exc:
            raise InvalidParam("polynomial: coeffs must be a list of reals") from exc
        if coeffs.size == 0 or not np.all(np.isfinite(coeffs)):
            raise InvalidParam("polynomial: coeffs must be a non-empty list of finite reals")
        dcoeffs = np.polynomial.polynomial.polyder(coeffs) if coeffs.size > 1 else np.zeros(1)
        p["coeffs"] = coeffs.tolist()
        return AnalyticFn(
            lambda z: np.polynomial.polynomial.polyval(z, coeffs),
            lambda z: np.polynomial.polynomial.polyval(z, dcoeffs),
            _entire,
            "polynomial",
            p,
        )
    b = p["b"]
    return AnalyticFn(_const(b), _const(0.0), _entire, "constant", p)


def make_problem(flux: str, initial: str, domain=(0.0, 2.0 * math.pi), flux_params=None, initial_params=None) -> Problem:
    return Problem(
        make_flux(flux, **(flux_params or {})),
        make_initial(initial, **(initial_params or {})),
        tuple(float(v) for v in domain),
    )
