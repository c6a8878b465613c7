"""Command line front end: solve, validate, converge, breaking.

Exit codes: 0 success, 1 config or usage error, 2 partial field (some grid
points had no admissible contour), 3 a numerical check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .characteristics import breaking_time, characteristic_solve
from .contour import select_radius
from .errors import ConfigError, ConsLawError
from .records import _json_safe, to_csv, to_json
from .runconfig import RunConfig, load_config
from .solver import evaluate_on, solve_field

EXIT_OK, EXIT_CONFIG, EXIT_PARTIAL, EXIT_CHECK = 0, 1, 2, 3


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _log(args, msg: str) -> None:
    if not args.quiet:
        print(msg, file=sys.stderr)


def _threads(args) -> int:
    return 0 if args.threads == 0 else max(1, args.threads)


def cmd_solve(cfg: RunConfig, args) -> int:
    problem = cfg.problem()
    samples = solve_field(cfg.grid.points(), problem, cfg.solver, threads=_threads(args))
    fmt = args.format or cfg.output.format
    path = args.output or cfg.output.path
    if fmt == "csv":
        text = to_csv(samples)
    else:
        meta = {"flux": cfg.flux, "initial": cfg.initial, "solver": cfg.solver.to_dict()}
        text = to_json(samples, cfg.output.include_diagnostics, meta)
    _emit(text, path)
    failed = sum(not s.ok for s in samples)
    _log(args, f"solved {len(samples) - failed}/{len(samples)} points")
    return EXIT_PARTIAL if failed else EXIT_OK


def _stats(values: list[float]) -> dict:
    if not values:
        return {"max": None, "rms": None, "count": 0}
    arr = np.asarray(values)
    return {"max": float(arr.max()), "rms": float(np.sqrt(np.mean(arr**2))), "count": int(arr.size)}


def validate_report(cfg: RunConfig, threads: int = 1) -> dict:
    """Compare the explicit field with the characteristic solution on the grid."""
    problem = cfg.problem()
    samples = solve_field(cfg.grid.points(), problem, cfg.solver, threads=threads)
    du, dc, pde = [], [], []
    frontier = []
    multivalued_ok = 0
    for s in samples:
        try:
            foot = characteristic_solve(s.x, s.t, problem)
            oracle = "ok"
        except ConsLawError as exc:
            foot, oracle = None, type(exc).__name__
        if not s.ok:
            frontier.append({"x": s.x, "t": s.t, "status": s.status, "oracle": oracle, "best_margin": s.best_margin})
            continue
        pde.append(s.pde_residual)
        if foot is None:
            multivalued_ok += 1
            continue
        du.append(abs(s.u - foot.u))
        dc.append(abs(s.celerity - float(problem.flux.c.eval(foot.u))))
    bound = 100 * cfg.solver.quad_tol
    su, sc = _stats(du), _stats(dc)
    worst = max([v for v in (su["max"], sc["max"]) if v is not None], default=0.0)
    per_time = {}
    for t in cfg.grid.times:
        pts = [s for s in samples if s.t == t]
        per_time[repr(t)] = {"solved": sum(s.ok for s in pts), "total": len(pts)}
    return {
        "points": len(samples),
        "solved": len(samples) - len(frontier),
        "u_discrepancy": su,
        "celerity_discrepancy": sc,
        "max_pde_residual": max(pde) if pde else None,
        "bound": bound,
        "within_bound": worst < bound,
        "solved_without_unique_foot": multivalued_ok,
        "per_time": per_time,
        "frontier": frontier,
    }


def cmd_validate(cfg: RunConfig, args) -> int:
    report = validate_report(cfg, _threads(args))
    _emit(json.dumps(_json_safe(report), indent=1) + "\n", args.output)
    _log(
        args,
        f"validate: max |du| = {report['u_discrepancy']['max']}, max |dc| = {report['celerity_discrepancy']['max']}, "
        f"bound {report['bound']:.1e}, solved {report['solved']}/{report['points']}",
    )
    if not report["within_bound"]:
        return EXIT_CHECK
    return EXIT_PARTIAL if report["frontier"] else EXIT_OK


def converge_table(cfg: RunConfig, nodes: list[int], points: list[tuple[float, float]]) -> list[dict]:
    problem = cfg.problem()
    rows = []
    for x, t in points:
        contour = select_radius(x, t, problem, cfg.solver)
        ref = characteristic_solve(x, t, problem).u
        errors = [abs(evaluate_on(contour.with_nodes(n), x, t, problem)["u"].real - ref) for n in nodes]
        rows.append({"x": x, "t": t, "radius": contour.radius, "nodes": list(nodes), "errors": errors,
                     "monotone": is_spectrally_monotone(errors)})
    return rows


def is_spectrally_monotone(errors: list[float], floor: float = 1e-13) -> bool:
    """Each error strictly below the previous one until round-off is reached."""
    for prev, cur in zip(errors, errors[1:]):
        if prev <= floor:
            return True
        if not cur < prev:
            return False
    return True


def cmd_converge(cfg: RunConfig, args) -> int:
    nodes = [int(n) for n in args.nodes.split(",")] if args.nodes else cfg.converge_nodes
    points = [tuple(float(v) for v in p.split(",")) for p in args.point] if args.point else cfg.converge_points
    if not points:
        raise ConfigError("converge needs points: [converge] points = [[x, t]] or --point x,t")
    if any(n < 8 or n % 2 for n in nodes):
        raise ConfigError("converge nodes must be even and >= 8")
    rows = converge_table(cfg, nodes, points)
    lines = ["x,t,radius,nodes,abs_error"]
    for row in rows:
        for n, e in zip(row["nodes"], row["errors"]):
            lines.append(f"{row['x']!r},{row['t']!r},{row['radius']!r},{n},{e:.17g}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all(r["monotone"] for r in rows) else EXIT_CHECK


def breaking_report(cfg: RunConfig) -> dict:
    problem = cfg.problem()
    tstar = breaking_time(problem)
    admissible = []
    for t in sorted(cfg.grid.times):
        ok = True
        for x in cfg.grid.xs():
            try:
                select_radius(float(x), t, problem, cfg.solver)
            except ConsLawError:
                ok = False
                break
        if ok:
            admissible.append(t)
    return {
        "breaking_time": tstar,
        "largest_admissible_time": max(admissible) if admissible else None,
        "admissible_times": admissible,
    }


def cmd_breaking(cfg: RunConfig, args) -> int:
    report = breaking_report(cfg)
    _emit(json.dumps(_json_safe(report), indent=1) + "\n", args.output)
    _log(args, f"breaking time {report['breaking_time']}, largest admissible grid time {report['largest_admissible_time']}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "validate": cmd_validate, "converge": cmd_converge, "breaking": cmd_breaking}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML run configuration")
    common.add_argument("--output", help="output file (default: config output.path, else stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="override output.format")
    common.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")
    common.add_argument("--allow-negative-t", action="store_true", help="accept negative times")
    common.add_argument("--quiet", action="store_true")

    parser = argparse.ArgumentParser(prog="conslaw-contour", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve on the configured grid")
    sub.add_parser("validate", parents=[common], help="compare with the characteristic solution")
    conv = sub.add_parser("converge", parents=[common], help="quadrature error against node count")
    conv.add_argument("--nodes", help="comma-separated node counts, e.g. 16,32,64,128")
    conv.add_argument("--point", action="append", help="x,t (repeatable)")
    sub.add_parser("breaking", parents=[common], help="breaking time and admissibility frontier")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args.config)
        cfg.allow_negative_t = cfg.allow_negative_t or args.allow_negative_t
        cfg.validate()
        return COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
