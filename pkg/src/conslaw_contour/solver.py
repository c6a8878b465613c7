"""Explicit contour-integral solutions of u_t + f(u)_x = 0.

For an admissible circle around x, with g(z) = z - x + t c(u0(z)):

    u     = (1/2 pi i) oint (1 + t c'(u0) u0') u0 / g dz
    c(u)  = (1/2 pi i t) oint log[g / (z - x)] dz
    u_x   = (1/2 pi i) oint u0' / g dz
    u_t   = -(1/2 pi i) oint c(u0) u0' / g dz

All four share one set of node evaluations; the node count is doubled until
successive results agree to ``quad_tol``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .catalog import AnalyticFn, Problem
from .config import SolverConfig
from .contour import Contour, count_poles, residue_mean, select_radius
from .errors import (
    ConsLawError,
    EvaluationError,
    InadmissibleContour,
    NoAdmissibleContour,
    QuadratureNotConverged,
    SeriesDiverging,
    TZero,
)

QUANTITIES = ("u", "celerity", "ux", "ut", "poles")


@dataclass
class SolutionSample:
    x: float
    t: float
    u: float = math.nan
    celerity: float = math.nan
    ux: float = math.nan
    ut: float = math.nan
    imag_residual: float = math.nan
    pde_residual: float = math.nan
    contour: Contour | None = None
    status: str = "ok"
    pole_count: float = math.nan
    message: str = ""
    best_margin: float = math.nan

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def radius(self) -> float:
        return self.contour.radius if self.contour else math.nan

    @property
    def nodes(self) -> int:
        return self.contour.nodes if self.contour else 0

    @property
    def mode(self) -> str:
        return self.contour.report.mode if self.contour and self.contour.report else ""


def _continuous_log1p(w: np.ndarray) -> np.ndarray:
    """log(1 + w) along the ordered ring, with the phase unwrapped.

    A branch constant drops out of a closed contour integral, so any
    continuous branch gives the same value; it only needs to be single-valued,
    which holds when 1 + w has winding number zero. The real part is formed
    with log1p so that small |w| (small t) keeps full relative accuracy.
    """
    re, im = w.real, w.imag
    modulus = 0.5 * np.log1p(2.0 * re + re * re + im * im)
    phase = np.unwrap(np.arctan2(im, 1.0 + re), axis=-1)
    h0, h1 = 1.0 + w[..., 0], 1.0 + w[..., -1]
    winding = (phase[..., -1] + np.angle(h0 / h1) - phase[..., 0]) / (2 * np.pi)
    if np.any(np.abs(winding) > 0.5):
        raise EvaluationError("log argument winds around zero on the contour")
    return modulus + 1j * phase


def _log1p_ratio(w: np.ndarray) -> np.ndarray:
    """log(1 + w) / w, so the celerity integrand carries no 1/t factor."""
    if np.max(np.abs(w)) < 1e-4:
        return 1.0 - w / 2.0 + w * w / 3.0 - w**3 / 4.0 + w**4 / 5.0
    with np.errstate(all="ignore"):
        return np.where(w != 0, _continuous_log1p(w) / w, 1.0)


def _stacked_integrand(x: float, t: float, problem: Problem):
    u0, c, cp = problem.u0, problem.flux.c, problem.flux.c_prime

    def integrand(z):
        v = u0.eval(z)
        dv = u0.deriv(z)
        cz = c.eval(v)
        if t == 0:
            g = z - x
            gp = np.ones_like(z)
            logh = np.zeros_like(z)
        else:
            g = z - x + t * cz
            gp = 1.0 + t * cp.eval(v) * dv
            q = cz / (z - x)
            logh = q * _log1p_ratio(t * q)
        return np.stack([gp * v / g, logh, dv / g, -cz * dv / g, gp / g])

    return integrand


def evaluate_on(contour: Contour, x: float, t: float, problem: Problem) -> dict[str, complex]:
    """All explicit integrals at a fixed contour and node count (no doubling).

    At t = 0 the celerity entry is c(u0(x)) evaluated directly.
    """
    vals = residue_mean(contour, _stacked_integrand(x, t, problem))
    out = dict(zip(QUANTITIES, (complex(v) for v in vals)))
    if t == 0:
        out["celerity"] = complex(problem.celerity0(x))
    return out


def converged_integrals(
    contour: Contour, x: float, t: float, problem: Problem, config: SolverConfig
) -> tuple[dict[str, complex], Contour]:
    """Double the node count from ``contour.nodes`` until all integrals settle."""
    prev = evaluate_on(contour, x, t, problem)
    n = contour.nodes
    change = math.inf
    while n * 2 <= config.max_nodes:
        n *= 2
        cur = evaluate_on(contour.with_nodes(n), x, t, problem)
        change = max(abs(cur[k] - prev[k]) / max(1.0, abs(cur[k])) for k in QUANTITIES)
        if change <= config.quad_tol:
            return cur, contour.with_nodes(n)
        prev = cur
    raise QuadratureNotConverged(
        f"quadrature at x={x}, t={t} not converged at {n} nodes (last change {change:.3g})", n, change
    )


def solve_point(
    x: float, t: float, problem: Problem, config: SolverConfig | None = None, contour: Contour | None = None
) -> SolutionSample:
    """Solve for u, c(u), u_x, u_t at one point. Raises on failure."""
    config = config or SolverConfig()
    contour = contour or select_radius(x, t, problem, config)
    vals, used = converged_integrals(contour, x, t, problem, config)
    u, cel, ux, ut = (vals[k] for k in ("u", "celerity", "ux", "ut"))
    return SolutionSample(
        x=x,
        t=t,
        u=u.real,
        celerity=cel.real,
        ux=ux.real,
        ut=ut.real,
        imag_residual=max(abs(v.imag) for v in (u, cel, ux, ut)),
        pde_residual=abs(ut.real + cel.real * ux.real),
        contour=used,
        pole_count=vals["poles"].real,
    )


def solve_u(x, t, problem, config=None, contour=None) -> float:
    return solve_point(x, t, problem, config, contour).u


def solve_celerity(x, t, problem, config=None, contour=None) -> float:
    """c(u(x, t)) from the logarithmic formula. Undefined at t = 0."""
    if t == 0:
        raise TZero("the celerity formula has a 1/t prefactor; use c(u0(x)) at t = 0")
    return solve_point(x, t, problem, config, contour).celerity


def solve_ux(x, t, problem, config=None, contour=None) -> float:
    return solve_point(x, t, problem, config, contour).ux


def solve_ut(x, t, problem, config=None, contour=None) -> float:
    return solve_point(x, t, problem, config, contour).ut


def _failed(x, t, exc: ConsLawError) -> SolutionSample:
    status = {
        NoAdmissibleContour: "no_contour",
        QuadratureNotConverged: "not_converged",
    }.get(type(exc), "eval_error")
    margin = getattr(exc, "best_margin", math.nan)
    return SolutionSample(x=x, t=t, status=status, message=str(exc), best_margin=margin)


def solve_field(
    grid: Iterable[tuple[float, float]],
    problem: Problem,
    config: SolverConfig | None = None,
    threads: int = 1,
) -> list[SolutionSample]:
    """Solve every (x, t) point independently; failures are flagged, not raised.

    Results come back in grid order whatever ``threads`` is.
    """
    config = config or SolverConfig()
    points = [(float(x), float(t)) for x, t in grid]

    def one(pt):
        try:
            return solve_point(pt[0], pt[1], problem, config)
        except ConsLawError as exc:
            return _failed(pt[0], pt[1], exc)

    if threads == 1 or len(points) < 2:
        return [one(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads or None) as pool:
        return list(pool.map(one, points))


def celerity_hopf_residual(
    problem: Problem, xs: Sequence[float], times: Sequence[float], config: SolverConfig | None = None
) -> np.ndarray:
    """Residual of [c]_t + [c^2 / 2]_x = 0 for the solved celerity field.

    Uses fourth-order central differences on a uniform grid: ``times`` must
    hold exactly five equally spaced levels and the residual is returned at
    the middle level for the interior points xs[2:-2].
    """
    xs = np.asarray(xs, dtype=float)
    times = np.asarray(times, dtype=float)
    if times.size != 5:
        raise ValueError("five time levels are needed for the fourth-order stencil")
    dx, dt = xs[1] - xs[0], times[1] - times[0]
    field_ = np.empty((5, xs.size))
    for i, t in enumerate(times):
        for j, x in enumerate(xs):
            s = solve_point(float(x), float(t), problem, config)
            field_[i, j] = s.celerity
    stencil = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
    c_t = stencil @ field_ / dt
    flux = 0.5 * field_[2] ** 2
    c_half_sq_x = (flux[:-4] - 8 * flux[1:-3] + 8 * flux[3:-1] - flux[4:]) / (12.0 * dx)
    return c_t[2:-2] + c_half_sq_x


# ---------------------------------------------------------------------------
# Cauchy derivatives and Lagrange reversion
# ---------------------------------------------------------------------------


def cauchy_derivative(F: AnalyticFn | callable, x: float, n: int, contour: Contour) -> float:
    """n-th derivative of F at x from n!/(2 pi i) oint F(z) / (z - x)^(n+1) dz."""
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    f = F.eval if isinstance(F, AnalyticFn) else F
    val = residue_mean(contour, lambda z: f(z) / (z - x) ** (n + 1))
    return float(math.factorial(n) * val.real)


def default_reversion_contour(F: AnalyticFn, x: float, nodes: int = 256) -> Contour:
    return Contour(x, min(1.0, 0.9 * F.rho(x)), nodes)


def lagrange_revert_series(
    F: AnalyticFn, x: float, n_terms: int, contour: Contour | None = None, tol: float = 1e-12
) -> float:
    """y solving y = x + F(y) from the truncated reversion series.

    Term n is (1/n!) d^(n-1)/dx^(n-1) [F(x)^n], each derivative taken with
    :func:`cauchy_derivative` on one fixed circle. Summation stops once three
    consecutive terms fall below ``tol * (1 + |y|)``. If ``n_terms`` run out
    while the last quarter of the terms is no smaller than the quarter before
    it, the series is declared divergent at x.
    """
    contour = contour or default_reversion_contour(F, x)
    y = float(x)
    small = 0
    sizes = []
    for n in range(1, n_terms + 1):
        deriv = cauchy_derivative(lambda z, n=n: F.eval(z) ** n, x, n - 1, contour)
        term = deriv / math.factorial(n)
        y += term
        sizes.append(abs(term))
        small = small + 1 if abs(term) < tol * (1 + abs(y)) else 0
        if small >= 3:
            return y
    q = len(sizes) // 4
    if q and max(sizes[-q:]) >= max(sizes[-2 * q : -q]) and sizes[-1] > math.sqrt(tol) * (1 + abs(y)):
        raise SeriesDiverging(f"reversion series at x={x} is not decaying after {n_terms} terms")
    return y


def lagrange_revert_integral(F: AnalyticFn, x: float, contour: Contour | None = None) -> float:
    """y solving y = x + F(y) from y = x + (i / 2 pi) oint log[1 - F(z)/(z - x)] dz."""
    contour = contour or default_reversion_contour(F, x)
    z, _ = contour.points()
    fz = F.eval(z)
    if not np.all(np.abs(z - x) > np.abs(fz)):
        raise InadmissibleContour(f"|z - x| > |F(z)| fails on the contour around x={x}")
    # principal branch is single-valued: the argument lies in |w - 1| < 1
    val = residue_mean(contour, lambda z: np.log(1.0 - F.eval(z) / (z - x)))
    return float(x - val.real)


def reversion_residual(F: AnalyticFn, x: float, y: float) -> float:
    return abs(y - x - F.eval(y))


__all__ = [
    "SolutionSample",
    "cauchy_derivative",
    "celerity_hopf_residual",
    "converged_integrals",
    "count_poles",
    "evaluate_on",
    "lagrange_revert_integral",
    "lagrange_revert_series",
    "solve_celerity",
    "solve_field",
    "solve_point",
    "solve_u",
    "solve_ut",
    "solve_ux",
]
