"""Map where explicit contour solutions exist on an (x, t) grid.

Prints one row per time level: the fraction of solved points, how many used a
strict versus certified contour, and the unsolved x-intervals.

    python scripts/frontier_scan.py --flux burgers --initial sine --t-max 1.5
"""

import argparse
import math

import numpy as np

from conslaw_contour import breaking_time, make_problem, solve_field


def intervals(xs, mask):
    """Maximal runs of ``True`` in ``mask`` as (x_start, x_end) pairs."""
    runs, start = [], None
    for x, flag in zip(xs, mask):
        if flag and start is None:
            start = x
        if not flag and start is not None:
            runs.append((start, prev))
            start = None
        prev = x
    if start is not None:
        runs.append((start, xs[-1]))
    return runs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flux", default="burgers")
    ap.add_argument("--initial", default="sine")
    ap.add_argument("--x-min", type=float, default=0.0)
    ap.add_argument("--x-max", type=float, default=2 * math.pi)
    ap.add_argument("--nx", type=int, default=129)
    ap.add_argument("--t-max", type=float, default=1.5)
    ap.add_argument("--nt", type=int, default=16)
    ap.add_argument("--threads", type=int, default=0)
    args = ap.parse_args(argv)

    problem = make_problem(args.flux, args.initial, (args.x_min, args.x_max))
    t_star = breaking_time(problem)
    print(f"# {args.flux}/{args.initial}, breaking time {t_star:.10g}")
    xs = np.linspace(args.x_min, args.x_max, args.nx)
    threads = args.threads or None
    for t in np.linspace(0.0, args.t_max, args.nt):
        samples = solve_field([(float(x), float(t)) for x in xs], problem, threads=threads or 1)
        ok = np.array([s.ok for s in samples])
        modes = [s.mode for s in samples if s.ok]
        holes = ", ".join(f"[{a:.3f}, {b:.3f}]" for a, b in intervals(xs, ~ok)) or "-"
        print(
            f"t={t:7.4f}  t/t*={t / t_star:6.3f}  solved={ok.mean():6.1%}  "
            f"strict={modes.count('strict'):4d}  certified={modes.count('certified'):4d}  holes: {holes}"
        )


if __name__ == "__main__":
    main()
