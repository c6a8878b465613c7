"""Method-of-characteristics reference solver and breaking-time estimate.

The classical implicit solution u = u0(X), X = x - t c(u0(X)) is solved for
the foot X with a safeguarded Newton iteration. Nothing here touches contour
integrals, so it serves as an independent check on the explicit formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .catalog import Problem
from .errors import MultipleRoots, NotConverged


@dataclass(frozen=True)
class CharacteristicFoot:
    X: float
    u: float
    iterations: int
    converged: bool

    def residual(self, x: float, t: float, problem: Problem) -> float:
        return abs(self.X - x + t * problem.celerity0(self.X))


def _bracket(x, t, problem, g):
    cmin, cmax = problem.celerity_range()
    lo, hi = sorted((x - t * cmax, x - t * cmin))
    width = max(hi - lo, 1e-12 * (1 + abs(x)))
    lo, hi = lo - 1e-12 * (1 + abs(lo)), hi + 1e-12 * (1 + abs(hi))
    # c(u0) may leave its sampled range outside the domain: widen until g changes sign
    for _ in range(60):
        if g(lo) <= 0 <= g(hi):
            return lo, hi
        if g(lo) > 0:
            lo -= width
        if g(hi) < 0:
            hi += width
        width *= 2
    raise NotConverged(f"could not bracket the characteristic foot at x={x}, t={t}")


def _sign_changes(g, lo, hi, pieces=64) -> int:
    vals = np.array([g(s) for s in np.linspace(lo, hi, pieces + 1)])
    signs = np.sign(vals)
    signs = signs[signs != 0]
    return int(np.count_nonzero(np.diff(signs)))


def characteristic_solve(x: float, t: float, problem: Problem, max_iter: int = 100, tol: float = 1e-14) -> CharacteristicFoot:
    """Foot X of the characteristic through (x, t) and u = u0(X).

    Solves g(X) = X - x + t c(u0(X)) = 0 by Newton steps kept inside a
    shrinking bisection bracket. Raises MultipleRoots when the bracket holds
    more than one sign change (t at or past breaking).
    """
    if t == 0:
        return CharacteristicFoot(float(x), float(problem.u0.eval(x)), 0, True)

    def g(s):
        return s - x + t * problem.celerity0(s)

    def dg(s):
        return 1.0 + t * problem.celerity0_slope(s)

    lo, hi = _bracket(x, t, problem, g)
    changes = _sign_changes(g, lo, hi)
    if changes > 1:
        raise MultipleRoots(f"{changes} sign changes of the foot equation at x={x}, t={t}", changes)

    X = 0.5 * (lo + hi)
    dx_old = hi - lo
    for it in range(1, max_iter + 1):
        gx, dgx = g(X), dg(X)
        if gx == 0:
            return CharacteristicFoot(X, float(problem.u0.eval(X)), it, True)
        if gx < 0:
            lo = X
        else:
            hi = X
        newton_ok = dgx != 0 and lo < X - gx / dgx < hi and abs(gx / dgx) < 0.5 * dx_old
        if newton_ok:
            step = gx / dgx
            X -= step
        else:
            step = X - 0.5 * (lo + hi)
            X = 0.5 * (lo + hi)
        dx_old = abs(step)
        if abs(step) <= tol * (1 + abs(X)) or hi - lo <= tol * (1 + abs(X)):
            # one more Newton polish keeps the residual at round-off
            gx, dgx = g(X), dg(X)
            if dgx != 0:
                X -= gx / dgx
            return CharacteristicFoot(X, float(problem.u0.eval(X)), it, True)
    raise NotConverged(f"foot iteration did not converge in {max_iter} steps at x={x}, t={t}")


def breaking_time(problem: Problem, scan_points: int = 2001) -> float:
    """First time characteristics cross: -1 / min_x d/dx c(u0(x)), or inf.

    The minimum slope is located on a uniform scan of the domain and polished
    with a bounded scalar minimisation over the neighbouring cells.
    """
    lo, hi = problem.domain
    xs = np.linspace(lo, hi, scan_points)
    slopes = np.asarray(problem.celerity0_slope(xs), dtype=float)
    k = int(np.argmin(slopes))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, scan_points - 1)]
    res = minimize_scalar(lambda s: float(problem.celerity0_slope(s)), bounds=(a, b), method="bounded", options={"xatol": 1e-12})
    smin = min(float(res.fun), float(slopes[k]))
    if smin >= 0:
        return math.inf
    return -1.0 / smin


def scan_minimum_slope(problem: Problem, scan_points: int = 2001) -> float:
    """Unpolished grid minimum of d/dx c(u0(x)), for comparison with the polish."""
    xs = np.linspace(*problem.domain, scan_points)
    return float(np.min(problem.celerity0_slope(xs)))
