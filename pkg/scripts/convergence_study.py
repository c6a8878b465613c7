"""Error of the trapezoidal contour quadrature against the characteristic oracle.

For each point the circle chosen by the solver is reused with N = 8 .. 512
nodes; the table shows |u_N - u_char| and the observed decay rate per doubling.

    python scripts/convergence_study.py --flux cubic --point 1.0,0.4
"""

import argparse

import numpy as np

from conslaw_contour import characteristic_solve, make_problem, select_radius
from conslaw_contour.solver import evaluate_on


def study(problem, x, t, nodes):
    contour = select_radius(x, t, problem)
    ref = characteristic_solve(x, t, problem).u
    errs = [abs(evaluate_on(contour.with_nodes(n), x, t, problem)["u"].real - ref) for n in nodes]
    return contour, errs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--flux", default="burgers")
    ap.add_argument("--initial", default="sine")
    ap.add_argument("--point", action="append", default=None, help="x,t (repeatable)")
    args = ap.parse_args(argv)

    problem = make_problem(args.flux, args.initial)
    points = [tuple(map(float, p.split(","))) for p in (args.point or ["1.0,0.5", "1.5707963267948966,0.8", "3.0,0.2"])]
    nodes = [8, 16, 32, 64, 128, 256, 512]
    for x, t in points:
        contour, errs = study(problem, x, t, nodes)
        print(f"# x={x:g} t={t:g}  radius={contour.radius:.4g}  mode={contour.report.mode}")
        prev = None
        for n, e in zip(nodes, errs):
            rate = "" if prev is None or e == 0 else f"  digits gained {np.log10(prev / e):5.2f}"
            print(f"  N={n:4d}  err={e:9.2e}{rate}")
            prev = e if e > 0 else None


if __name__ == "__main__":
    main()
