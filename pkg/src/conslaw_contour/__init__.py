"""Explicit contour-integral solutions of scalar conservation laws u_t + f(u)_x = 0."""

from .catalog import AnalyticFn, FluxSpec, Problem, make_flux, make_initial, make_problem
from .characteristics import CharacteristicFoot, breaking_time, characteristic_solve
from .config import SolverConfig
from .contour import AdmissibilityReport, Contour, count_poles, integrate, select_radius
from .errors import (
    ConfigError,
    ConsLawError,
    EvaluationError,
    InadmissibleContour,
    InvalidParam,
    MultipleRoots,
    NoAdmissibleContour,
    NotConverged,
    QuadratureNotConverged,
    SeriesDiverging,
    TZero,
    UnknownFlux,
    UnknownInitial,
)
from .solver import (
    SolutionSample,
    cauchy_derivative,
    lagrange_revert_integral,
    lagrange_revert_series,
    solve_celerity,
    solve_field,
    solve_point,
    solve_u,
    solve_ut,
    solve_ux,
)

__version__ = "0.1.0"
