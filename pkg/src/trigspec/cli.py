"""``trigspec`` command line.

    trigspec table T3 --out results/
    trigspec run --scenario batch.json
    trigspec fit --func cos_theta --theta 100 --s -1 --e 1 --p 8 --q 9
    trigspec integrate --func power --n 4 --method all
    trigspec ode-linear --xi 2 --out sol.csv
    trigspec ode-nonlinear --theta 4.71238898038469 --method all
"""

from __future__ import annotations

import argparse
import math
import sys

from .extension import DomainError
from .fft import SizeError
from .harness import (TABLE_IDS, Kind, RunReport, Scenario, ValidationError, format_number,
                      load_scenarios, run_scenario, run_table)
from .interp import ConfigurationError, InconsistentSamplesError
from .ode_linear import IntegratingFactorRangeError
from .ode_nonlinear import ConvergenceFailure, DivergenceError
from .optimizer import NumericalFailure
from .registry import FUNCTION_IDS, UnknownFunctionError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONVERGENCE = 3
EXIT_NUMERICAL = 4


def _grid_args(p, s=-1.0, e=1.0, pp=7, q=8):
    p.add_argument("--s", type=float, default=s, help="left end of the interval")
    p.add_argument("--e", type=float, default=e, help="right end of the interval")
    p.add_argument("--p", type=int, default=pp, help="2**p grid spacings span [s, e]")
    p.add_argument("--q", type=int, default=q, help="2**q cosine terms")
    p.add_argument("--r", type=float, default=0.5, help="cut-off shape parameter")
    p.add_argument("--out", help="write a per-point CSV here")


def _func_args(p):
    p.add_argument("--func", default="cos_theta", choices=[f for f in FUNCTION_IDS if f != "ode_test"])
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trigspec", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="reproduce one experiment table as CSV")
    t.add_argument("table_id", choices=TABLE_IDS + tuple(x.lower() for x in TABLE_IDS))
    t.add_argument("--out", default=".", help="output directory (default: cwd)")
    t.add_argument("--p", type=int, help="grid override for T3 to T5")
    t.add_argument("--q", type=int, help="grid override for T3 to T5")

    r = sub.add_parser("run", help="run scenarios from a JSON file")
    r.add_argument("--scenario", required=True, metavar="FILE")

    f = sub.add_parser("fit", help="cut-off extension fit of a built-in function")
    _func_args(f)
    _grid_args(f)

    i = sub.add_parser("integrate", help="spectral and Newton-Cotes integrals")
    _func_args(i)
    _grid_args(i)
    i.add_argument("--method", default="all", choices=["spectral", "trapezoid", "simpson", "all"])
    i.add_argument("--panels", type=int, help="baseline panel count (default 2**q)")

    lo = sub.add_parser("ode-linear", help="y' + x^n y = x^n, y(s) = xi")
    _grid_args(lo, s=1.0, e=3.0, pp=7, q=8)
    lo.add_argument("--n", type=int, default=2)
    lo.add_argument("--xi", type=float, default=0.0)

    nl = sub.add_parser("ode-nonlinear", help="y' = g(x) + x y + y^2 with y = x cos(theta x)")
    _grid_args(nl, s=1.0, e=3.0, pp=6, q=7)
    nl.add_argument("--theta", type=float, default=math.pi / 2)
    nl.add_argument("--xi", type=float, help="initial value; must equal s cos(theta s)")
    nl.add_argument("--method", default="all", choices=["intp", "rk4", "benc", "all"])
    nl.add_argument("--tol", type=float, help="objective tolerance for the optimiser")
    return ap


def _print_report(rep: RunReport, out=None) -> None:
    out = out or sys.stdout
    print(rep.scenario_id, file=out)
    for k, v in rep.metrics.items():
        print(f"  {k} = {format_number(v)}", file=out)


def _scenario_from_args(args) -> Scenario:
    grid = {"s": args.s, "e": args.e, "p": args.p, "q": args.q, "r": args.r}
    if args.command in ("fit", "integrate"):
        params = {"func": args.func, **grid}
        for key in ("theta", "n", "d"):
            if getattr(args, key) is not None:
                params[key] = getattr(args, key)
        if args.command == "fit":
            return Scenario(Kind.EXTENSION_FIT, params, args.out)
        if args.method != "all":
            params["methods"] = [args.method]
        if args.panels is not None:
            params["panels"] = args.panels
        return Scenario(Kind.INTEGRAL, params)
    if args.command == "ode-linear":
        return Scenario(Kind.LINEAR_ODE, {**grid, "n": args.n, "xi": args.xi}, args.out)
    params = {**grid, "theta": args.theta}
    if args.xi is not None and abs(args.xi - args.s * math.cos(args.theta * args.s)) > 1e-12:
        raise ValidationError("--xi must equal s*cos(theta*s) for the built-in test problem")
    if args.method != "all":
        params["methods"] = [args.method]
    if args.tol is not None:
        params["tol_objective"] = args.tol
    return Scenario(Kind.NONLINEAR_ODE, params, args.out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "table":
            reports = run_table(args.table_id, args.out, args.p, args.q)
            for rep in reports:
                _print_report(rep)
        elif args.command == "run":
            for sc in load_scenarios(args.scenario):
                _print_report(run_scenario(sc))
        else:
            _print_report(run_scenario(_scenario_from_args(args)))
    except (DomainError, IntegratingFactorRangeError, DivergenceError, NumericalFailure,
            ArithmeticError) as exc:
        print(f"trigspec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, UnknownFunctionError, ConfigurationError, InconsistentSamplesError,
            SizeError, ValueError, OSError) as exc:
        print(f"trigspec: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceFailure as exc:
        print(f"trigspec: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
