from __future__ import annotations

from dataclasses import asdict, dataclass, fields

from .errors import ConfigError


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and quadrature / radius-search policy shared by all solvers.

    min_margin is relative: a strict contour needs
    ``R - max|t c(u0(z))| >= min_margin * R`` on the probe ring, and a
    certified contour needs ``min |1 + t c(u0(z)) / (z - x)| >= min_margin``.
    """

    quad_tol: float = 1e-10
    imag_tol: float = 1e-8
    pde_tol: float = 1e-7
    pole_tol: float = 1e-6
    initial_nodes: int = 128
    max_nodes: int = 4096
    min_margin: float = 0.05
    radius_scan_points: int = 32
    probe_factor: int = 4
    safety: float = 0.9
    max_radius: float = 4.0
    min_radius_fraction: float = 1e-3
    # round-off guard: max |u0| on the ring relative to max(1, |u0(x)|)
    max_growth: float = 1e4
    certify: bool = True

    def __post_init__(self):
        for name in ("quad_tol", "imag_tol", "pde_tol", "pole_tol", "max_radius", "max_growth"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"solver.{name} must be > 0")
        if not 0 < self.min_margin < 1:
            raise ConfigError("solver.min_margin must lie in (0, 1)")
        if not 0 < self.safety < 1:
            raise ConfigError("solver.safety must lie in (0, 1)")
        if not 0 < self.min_radius_fraction < 1:
            raise ConfigError("solver.min_radius_fraction must lie in (0, 1)")
        if self.initial_nodes < 8 or self.initial_nodes % 2:
            raise ConfigError("solver.initial_nodes must be even and >= 8")
        if self.max_nodes < self.initial_nodes:
            raise ConfigError("solver.max_nodes must be >= solver.initial_nodes")
        if self.radius_scan_points < 2:
            raise ConfigError("solver.radius_scan_points must be >= 2")
        if self.probe_factor < 1:
            raise ConfigError("solver.probe_factor must be >= 1")

    @classmethod
    def from_mapping(cls, data: dict) -> "SolverConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown solver key(s): {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)
