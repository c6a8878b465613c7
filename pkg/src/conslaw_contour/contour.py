"""Circular contours, trapezoidal contour quadrature and radius selection.

All contours are circles centred on the real point being solved for. The
trapezoidal rule on a circle converges geometrically for integrands analytic
in an annulus around it, so every contour integral in the package goes through
:func:`residue_mean`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .catalog import Problem
from .config import SolverConfig
from .errors import EvaluationError, NoAdmissibleContour

Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of checking one circle against the contour constraints.

    ``margin`` is the strict margin ``min_z |z - x| - |t c(u0(z))|`` over the
    probe ring, ``rho_slack`` the distance still available before the
    analyticity bound. A ``certified`` contour fails the strict inequality but
    provably encloses exactly one zero of ``z - x + t c(u0(z))``, namely the
    unique real characteristic foot.
    """

    margin: float
    rho_slack: float
    mode: str = "strict"
    separation: float = math.nan
    pole_count: float = math.nan
    growth: float = 1.0

    @property
    def strict_ok(self) -> bool:
        return self.margin > 0 and self.rho_slack > 0

    @property
    def ok(self) -> bool:
        if self.mode == "certified":
            return self.rho_slack > 0 and self.separation > 0 and abs(self.pole_count - 1) < 0.25
        return self.strict_ok


@dataclass(frozen=True)
class Contour:
    center: float
    radius: float
    nodes: int = 128
    report: AdmissibilityReport | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"contour radius must be positive and finite, got {self.radius}")
        if self.nodes < 8 or self.nodes % 2:
            raise ValueError(f"contour node count must be even and >= 8, got {self.nodes}")

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes z_j and unit phases w_j = exp(2 pi i j / N)."""
        w = np.exp(2j * np.pi * np.arange(self.nodes) / self.nodes)
        return self.center + self.radius * w, w

    def with_nodes(self, nodes: int) -> "Contour":
        return replace(self, nodes=nodes)


def _evaluate(integrand: Integrand, z: np.ndarray) -> np.ndarray:
    try:
        with np.errstate(all="ignore"):
            vals = np.asarray(integrand(z))
    except EvaluationError:
        raise
    except (ZeroDivisionError, FloatingPointError, OverflowError, ValueError) as exc:
        raise EvaluationError(f"integrand failed at a contour node: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("integrand is non-finite at a contour node")
    return vals


def residue_mean(contour: Contour, integrand: Integrand):
    """(1 / 2 pi i) times the contour integral, by the trapezoidal rule.

    The integrand may return shape ``(N,)`` or a stack ``(k, N)``; stacks
    give a length-k array of integrals sharing one set of evaluations.
    """
    z, w = contour.points()
    vals = _evaluate(integrand, z)
    out = contour.radius * np.mean(vals * w, axis=-1)
    return complex(out) if np.ndim(out) == 0 else out


def integrate(contour: Contour, integrand: Integrand):
    """Contour integral (2 pi i R / N) sum_j w_j g(z_j)."""
    return 2j * np.pi * residue_mean(contour, integrand)


def count_poles(contour: Contour, x: float, t: float, problem: Problem) -> complex:
    """Number of zeros of z - x + t c(u0(z)) inside the contour (argument principle)."""
    u0, c, cp = problem.u0, problem.flux.c, problem.flux.c_prime

    def integrand(z):
        if t == 0:
            return 1.0 / (z - x)
        v = u0.eval(z)
        return (1.0 + t * cp.eval(v) * u0.deriv(z)) / (z - x + t * c.eval(v))

    return residue_mean(contour, integrand)


def strict_margin(x: float, t: float, problem: Problem, radius: float, probes: int = 512) -> float:
    """min over a ring of |z - x| - |t c(u0(z))|."""
    z, _ = Contour(x, radius, probes).points()
    return float(radius - np.max(np.abs(t * problem.celerity0(z))))


def foot_is_unique(x: float, t: float, problem: Problem, samples: int = 257) -> bool:
    """True when z - x + t c(u0(z)) is strictly increasing on the real bracket of
    possible feet, so its real zero is unique.

    The bracket [x - t c_max, x - t c_min] uses the range of c(u0) sampled on
    the problem domain.
    """
    if t == 0:
        return True
    cmin, cmax = problem.celerity_range()
    a, b = sorted((x - t * cmax, x - t * cmin))
    s = np.linspace(a, b, samples)
    return bool(np.all(1.0 + t * problem.celerity0_slope(s) > 0))


def _analytic_radius(x: float, problem: Problem, config: SolverConfig) -> float:
    return min(config.max_radius, config.safety * problem.u0.rho(x))


def _probe(x, t, radius, problem, config, r_analytic, certify):
    """Evaluate one candidate radius on the dense probe ring."""
    n = config.probe_factor * config.initial_nodes
    z, w = Contour(x, radius, n).points()
    u0x = problem.u0.eval(x)
    v = problem.u0.eval(z)
    c = problem.flux.c.eval(v)
    tc = t * c
    margin = float(radius - np.max(np.abs(tc)))
    slack = r_analytic - radius
    flux_rho = min(problem.flux.c.rho(u0x), problem.flux.c_prime.rho(u0x))
    if math.isfinite(flux_rho):
        slack = min(slack, config.safety * flux_rho - float(np.max(np.abs(v - u0x))))
    growth = float(np.max(np.abs(v)) / max(1.0, abs(u0x)))
    separation = pole_count = math.nan
    if certify:
        g = z - x + tc
        separation = float(np.min(np.abs(g / (z - x))))
        with np.errstate(all="ignore"):
            gp = 1.0 + t * problem.flux.c_prime.eval(v) * problem.u0.deriv(z)
            pole_count = float((radius * np.mean(gp / g * w)).real)
    return AdmissibilityReport(
        margin=margin,
        rho_slack=slack,
        mode="certified" if certify else "strict",
        separation=separation,
        pole_count=pole_count,
        growth=growth,
    )


def admissibility(contour: Contour, t: float, problem: Problem, config: SolverConfig | None = None) -> AdmissibilityReport:
    """Strict admissibility report for an existing contour."""
    config = config or SolverConfig()
    r_analytic = config.safety * problem.u0.rho(contour.center)
    try:
        return _probe(contour.center, t, contour.radius, problem, config, r_analytic, certify=True)
    except EvaluationError:
        return AdmissibilityReport(-math.inf, -math.inf, mode="strict")


def select_radius(x: float, t: float, problem: Problem, config: SolverConfig | None = None) -> Contour:
    """Choose an admissible circle around ``x`` for time ``t``.

    Strict candidates (the sufficient condition |z - x| > |t c(u0(z))|) are
    scanned first on a geometric grid between |t c(u0(x))| and the analytic
    radius; the one with the largest margin wins. If none qualifies and
    ``config.certify`` is set, circles that enclose exactly one zero of
    z - x + t c(u0(z)) are accepted when the real foot is unique, maximising
    the separation min |1 + t c(u0(z)) / (z - x)|.
    """
    config = config or SolverConfig()
    r_hi = _analytic_radius(x, problem, config)
    if not r_hi > 0:
        raise NoAdmissibleContour(f"no analyticity room at x={x}", reason="analyticity")
    r_floor = config.min_radius_fraction * r_hi
    n = config.radius_scan_points
    best_margin = -math.inf

    def scan(radii, certify):
        nonlocal best_margin
        out = []
        for radius in radii:
            try:
                rep = _probe(x, t, float(radius), problem, config, r_hi, certify)
            except EvaluationError:
                continue
            best_margin = max(best_margin, rep.margin)
            if rep.rho_slack > 0 and rep.growth <= config.max_growth:
                out.append((float(radius), rep))
        return out

    if t == 0:
        # growth and flux slack only worsen with radius (maximum modulus), so the
        # admissible radii form a prefix of the grid: bisect for its end
        radii = np.geomspace(r_floor, r_hi, n)
        lo, hi = -1, n
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if scan(radii[mid : mid + 1], certify=False):
                lo = mid
            else:
                hi = mid
        if lo >= 0:
            ((radius, rep),) = scan(radii[(lo + 1) // 2 : (lo + 1) // 2 + 1], certify=False)
            return Contour(x, radius, config.initial_nodes, replace(rep, mode="initial"))
        raise NoAdmissibleContour(f"no analytic circle at x={x}, t=0", best_margin, "analyticity")

    r_lo = (1.0 + 1e-9) * abs(t * problem.celerity0(x))
    if r_lo < r_hi:
        cands = scan(np.geomspace(max(r_lo, r_floor), r_hi, n), certify=False)
        strict = [(r, rep) for r, rep in cands if rep.margin >= config.min_margin * r]
        if strict:
            radius, rep = max(strict, key=lambda item: item[1].margin)
            return Contour(x, radius, config.initial_nodes, rep)

    reason = "strict"
    if config.certify:
        if foot_is_unique(x, t, problem):
            cands = scan(np.geomspace(r_floor, r_hi, n), certify=True)
            good = [
                (r, rep)
                for r, rep in cands
                if rep.separation >= config.min_margin and abs(rep.pole_count - 1) < 0.25
            ]
            if good:
                radius, rep = max(good, key=lambda item: item[1].separation)
                return Contour(x, radius, config.initial_nodes, rep)
            reason = "pole_count"
        else:
            reason = "multiple_feet"
    raise NoAdmissibleContour(
        f"no admissible contour at x={x}, t={t} (best strict margin {best_margin:.3g}, {reason})",
        best_margin,
        reason,
    )
