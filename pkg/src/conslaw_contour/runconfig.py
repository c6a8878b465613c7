"""TOML run configuration for the command line front end.

Example::

    [flux]
    name = "burgers"

    [initial]
    name = "sine"
    params = { a = 1.0, k = 1.0 }

    [grid]
    x_min = 0.0
    x_max = 6.283185307179586
    nx = 101
    times = [0.0, 0.5]

    [solver]
    quad_tol = 1e-10

    [output]
    format = "csv"
    path = "field.csv"
    include_diagnostics = false

    [converge]            # optional, used by `converge`
    points = [[1.0, 0.5]]
    nodes = [16, 32, 64, 128]

Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .catalog import Problem, make_flux, make_initial
from .config import SolverConfig
from .errors import ConfigError, ConsLawError

SECTIONS = {"flux", "initial", "grid", "solver", "output", "converge", "allow_negative_t"}
FAMILY_KEYS = {"name", "params"}
GRID_KEYS = {"x_min", "x_max", "nx", "times"}
OUTPUT_KEYS = {"format", "path", "include_diagnostics"}
CONVERGE_KEYS = {"points", "nodes"}


@dataclass
class GridSpec:
    x_min: float
    x_max: float
    nx: int
    times: list[float]

    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    def points(self) -> list[tuple[float, float]]:
        """Grid points ordered time-major, x ascending within each time."""
        return [(float(x), float(t)) for t in self.times for x in self.xs()]


@dataclass
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    include_diagnostics: bool = False


@dataclass
class RunConfig:
    flux: dict
    initial: dict
    grid: GridSpec
    solver: SolverConfig = field(default_factory=SolverConfig)
    output: OutputSpec = field(default_factory=OutputSpec)
    converge_points: list[tuple[float, float]] = field(default_factory=list)
    converge_nodes: list[int] = field(default_factory=lambda: [16, 32, 64, 128])
    allow_negative_t: bool = False

    def problem(self) -> Problem:
        try:
            flux = make_flux(self.flux["name"], **self.flux.get("params", {}))
            u0 = make_initial(self.initial["name"], **self.initial.get("params", {}))
        except ConsLawError as exc:
            raise ConfigError(str(exc)) from exc
        return Problem(flux, u0, (self.grid.x_min, self.grid.x_max))

    def validate(self) -> None:
        if not self.allow_negative_t and any(t < 0 for t in self.grid.times):
            raise ConfigError("grid.times: negative times need --allow-negative-t")
        if not self.allow_negative_t and any(t < 0 for _, t in self.converge_points):
            raise ConfigError("converge.points: negative times need --allow-negative-t")


def _reject_unknown(where: str, data: dict, allowed: set[str]) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        keys = ", ".join(f"{where}.{k}" if where else k for k in unknown)
        raise ConfigError(f"unknown key(s): {keys}")


def _table(data: dict, key: str, required: bool = True) -> dict:
    if key not in data:
        if required:
            raise ConfigError(f"missing section [{key}]")
        return {}
    val = data[key]
    if not isinstance(val, dict):
        raise ConfigError(f"[{key}] must be a table")
    return val


def _family(data: dict, key: str) -> dict:
    sec = _table(data, key)
    _reject_unknown(key, sec, FAMILY_KEYS)
    if "name" not in sec:
        raise ConfigError(f"{key}.name is required")
    params = sec.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"{key}.params must be a table")
    return {"name": str(sec["name"]), "params": dict(params)}


def _number(sec: dict, where: str, key: str, kind=float):
    try:
        val = kind(sec[key])
    except KeyError:
        raise ConfigError(f"{where}.{key} is required") from None
    except (TypeError, ValueError):
        raise ConfigError(f"{where}.{key} must be a {kind.__name__}") from None
    if kind is float and not math.isfinite(val):
        raise ConfigError(f"{where}.{key} must be finite")
    return val


def parse_config(data: dict) -> RunConfig:
    _reject_unknown("", data, SECTIONS)
    flux = _family(data, "flux")
    initial = _family(data, "initial")

    g = _table(data, "grid")
    _reject_unknown("grid", g, GRID_KEYS)
    times = g.get("times")
    if not isinstance(times, list) or not times:
        raise ConfigError("grid.times must be a non-empty list of reals")
    try:
        times = [float(t) for t in times]
    except (TypeError, ValueError):
        raise ConfigError("grid.times must be a non-empty list of reals") from None
    grid = GridSpec(_number(g, "grid", "x_min"), _number(g, "grid", "x_max"), _number(g, "grid", "nx", int), times)
    if grid.nx < 2:
        raise ConfigError("grid.nx must be >= 2")
    if not grid.x_min < grid.x_max:
        raise ConfigError("grid.x_min must be < grid.x_max")

    try:
        solver = SolverConfig.from_mapping(_table(data, "solver", required=False))
    except TypeError as exc:
        raise ConfigError(f"solver: {exc}") from None

    o = _table(data, "output", required=False)
    _reject_unknown("output", o, OUTPUT_KEYS)
    output = OutputSpec(
        format=str(o.get("format", "csv")),
        path=o.get("path"),
        include_diagnostics=bool(o.get("include_diagnostics", False)),
    )
    if output.format not in ("csv", "json"):
        raise ConfigError(f"output.format must be csv or json, got {output.format!r}")

    cv = _table(data, "converge", required=False)
    _reject_unknown("converge", cv, CONVERGE_KEYS)
    try:
        points = [(float(p[0]), float(p[1])) for p in cv.get("points", [])]
        nodes = [int(n) for n in cv.get("nodes", [16, 32, 64, 128])]
    except (TypeError, ValueError, IndexError):
        raise ConfigError("converge.points must be [[x, t], ...] and converge.nodes a list of ints") from None

    cfg = RunConfig(
        flux=flux,
        initial=initial,
        grid=grid,
        solver=solver,
        output=output,
        converge_points=points,
        converge_nodes=nodes,
        allow_negative_t=bool(data.get("allow_negative_t", False)),
    )
    cfg.problem()
    return cfg


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    try:
        return parse_config(data)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
