"""Scenario runner and canonical experiment tables with CSV output."""

from __future__ import annotations

import csv
import enum
import json
import math
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .extension import (ExtensionConfig, TableSampler, consecutive_error_series, cutoff_h,
                        direct_extension_fit, extend_and_fit, longest_same_sign_run,
                        sign_alternation_fraction)
from .interp import Parity, fit_function
from .ode_linear import LinearOdeProblem, solve_linear
from .ode_nonlinear import benc, ode_test_problem, rk4, solve_nonlinear
from .optimizer import OptimizerConfig
from .quadrature import (IntegralTask, integrate_simpson, integrate_spectral,
                         integrate_trapezoid, log10_error)
from .registry import lookup

PROBE_COUNT = 2**12
TABLE_IDS = ("T1", "T2", "T3", "T4", "T5", "T6", "T7")
# converge to the objective level the reference runs report, not just the library default
TABLE7_OPTIMIZER = OptimizerConfig(tol_objective=1e-17, tol_gradient=1e-16)


class ValidationError(ValueError):
    """A scenario is malformed; raised before any computation."""


class Kind(enum.Enum):
    CUTOFF_TABLE = "cutoff_table"
    PERIODIC_FIT = "periodic_fit"
    EXTENSION_FIT = "extension_fit"
    INTEGRAL = "integral"
    LINEAR_ODE = "linear_ode"
    NONLINEAR_ODE = "nonlinear_ode"
    ERROR_LOCALITY = "error_locality"


_REQUIRED = {
    Kind.CUTOFF_TABLE: ("q", "r"),
    Kind.PERIODIC_FIT: ("func", "M"),
    Kind.EXTENSION_FIT: ("func", "s", "e", "p", "q"),
    Kind.INTEGRAL: ("func", "s", "e", "p", "q"),
    Kind.LINEAR_ODE: ("s", "e", "p", "q", "xi"),
    Kind.NONLINEAR_ODE: ("theta", "s", "e", "p", "q"),
    Kind.ERROR_LOCALITY: ("func", "s", "e", "p", "q"),
}


@dataclass
class Scenario:
    kind: Kind
    params: dict
    output_path: Optional[str] = None
    scenario_id: str = ""

    def __post_init__(self):
        try:
            self.kind = Kind(self.kind) if not isinstance(self.kind, Kind) else self.kind
        except ValueError:
            raise ValidationError(f"unknown scenario kind {self.kind!r}") from None
        missing = [k for k in _REQUIRED[self.kind] if k not in self.params]
        if missing:
            raise ValidationError(f"{self.kind.value}: missing parameter(s) {', '.join(missing)}")
        if not self.scenario_id:
            tail = ",".join(f"{k}={self.params[k]}" for k in sorted(self.params))
            self.scenario_id = f"{self.kind.value}[{tail}]"
        # resolve function ids early so typos fail before any work
        if "func" in self.params and self.params["func"] != "ode_test":
            try:
                _function(self.params)
            except (KeyError, ValueError) as exc:
                raise ValidationError(f"{self.scenario_id}: {exc}") from None


@dataclass
class RunReport:
    scenario_id: str
    metrics: dict = field(default_factory=dict)
    series: dict = field(default_factory=dict)

    @property
    def max_abs_error(self) -> Optional[float]:
        return self.metrics.get("max_abs_error")

    @property
    def log10_max_error(self) -> Optional[float]:
        err = self.max_abs_error
        if err is None:
            return None
        return math.log10(err) if err > 0 else -math.inf


def _function(params):
    return lookup(params["func"], params.get("theta"), params.get("n"), params.get("d"))


def _cfg(params) -> ExtensionConfig:
    return ExtensionConfig(float(params["s"]), float(params["e"]), int(params["p"]),
                           int(params["q"]), float(params.get("r", 0.5)),
                           params.get("parity", "even"))


def _log10(err: float) -> float:
    return math.log10(err) if err > 0 else -math.inf


def _probes(lo, hi):
    return np.linspace(lo, hi, PROBE_COUNT + 1)


def run_cutoff(params) -> RunReport:
    q, r = int(params["q"]), float(params["r"])
    s, e = float(params.get("s", -1.0)), float(params.get("e", 1.0))
    cfg = ExtensionConfig(s, e, q - 1, q, r)
    poly = extend_and_fit(lambda x: np.ones_like(x), cfg)
    x = _probes(cfg.offset, cfg.e + cfg.delta)
    h = cutoff_h(x, cfg.cutoff)
    hm = poly(x)
    err = float(np.max(np.abs(hm - h)))
    return RunReport("", {"q": q, "r": r, "delta": cfg.delta, "max_abs_error": err},
                     {"x": x, "h": h, "h_M": hm})


def run_periodic(params) -> RunReport:
    fn = _function(params)
    m = int(params["M"])
    b = float(params.get("b", math.pi))
    poly = fit_function(fn.value, b, 2 * m, params.get("parity", "even"))
    x = _probes(-b, b)
    err = float(np.max(np.abs(poly(x) - fn.value(x))))
    derr = float(np.max(np.abs(poly.derivative(x, 1) - fn.d1(x))))
    return RunReport("", {"M": m, "max_abs_error": err, "max_deriv_error": derr,
                          "eps_M": poly.eps_m},
                     {"x": x, "f": fn.value(x), "f_M": poly(x)})


def run_extension(params) -> RunReport:
    fn = _function(params)
    cfg = _cfg(params)
    fitted = extend_and_fit(fn.value, cfg)
    direct = direct_extension_fit(fn.value, cfg.s, cfg.e, cfg.m_terms)
    x = _probes(cfg.s, cfg.e)
    metrics = {}
    for k, tag in ((0, ""), (1, "'"), (2, "''")):
        exact = fn.derivative(k)(x)
        metrics[f"EL(f{tag}_M)"] = _log10(float(np.max(np.abs(direct.derivative(x, k) - exact))))
        metrics[f"EL(fhat{tag}_M)"] = _log10(float(np.max(np.abs(fitted.derivative(x, k) - exact))))
    fx, fm = fn.value(x), fitted(x)
    metrics["max_abs_error"] = float(np.max(np.abs(fm - fx)))
    return RunReport("", metrics, {"x": x, "f": fx, "fhat_M": fm, "error": fm - fx})


def run_integral(params) -> RunReport:
    fn = _function(params)
    cfg = _cfg(params)
    exact = fn.integral(cfg.s, cfg.e)
    panels = int(params.get("panels", cfg.m_terms))
    methods = params.get("methods", ["spectral", "trapezoid", "simpson"])
    metrics = {"exact": exact}
    for m in methods:
        if m == "spectral":
            est = integrate_spectral(IntegralTask(fn.value, cfg.s, cfg.e, cfg, exact))
        elif m == "trapezoid":
            est = integrate_trapezoid(fn.value, cfg.s, cfg.e, panels)
        elif m == "simpson":
            est = integrate_simpson(fn.value, cfg.s, cfg.e, panels)
        else:
            raise ValidationError(f"unknown quadrature method {m!r}")
        metrics[f"{m}_estimate"] = est
        metrics[f"{m}_log10_error"] = log10_error(est, exact)
    return RunReport("", metrics)


def linear_test_problem(n: int, y0: float, cfg: ExtensionConfig):
    """``y' + x^n y = x^n, y(s) = y0``; exact ``(y0 - 1) exp((s^{n+1} - x^{n+1})/(n+1)) + 1``."""
    s = cfg.s

    def exact(x):
        return (y0 - 1.0) * np.exp((s ** (n + 1) - np.asarray(x) ** (n + 1)) / (n + 1)) + 1.0

    pw = lambda x: np.asarray(x, dtype=np.float64) ** n
    return LinearOdeProblem(pw, pw, s, y0, cfg), exact


def run_linear(params) -> RunReport:
    cfg = _cfg(params)
    prob, exact = linear_test_problem(int(params.get("n", 2)), float(params["xi"]), cfg)
    poly = solve_linear(prob)
    x = cfg.interval_nodes()
    y = poly(x)
    err = np.abs(y - exact(x))
    return RunReport("", {"xi": prob.y0, "max_abs_error": float(err.max()),
                          "initial_error": abs(float(poly(cfg.s)) - prob.y0)},
                     {"x": x, "y_est": y, "y_exact": exact(x), "error": y - exact(x)})


def _opt_cfg(params) -> OptimizerConfig:
    base = TABLE7_OPTIMIZER
    return OptimizerConfig(
        max_iterations=int(params.get("max_iterations", base.max_iterations)),
        tol_objective=float(params.get("tol_objective", base.tol_objective)),
        tol_gradient=float(params.get("tol_gradient", base.tol_gradient)),
        memory=int(params.get("memory", base.memory)),
    )


def run_nonlinear(params) -> RunReport:
    theta = float(params["theta"])
    prob = ode_test_problem(theta, float(params["s"]), float(params["e"]), int(params["p"]),
                            int(params["q"]), float(params.get("r", 0.5)))
    methods = params.get("methods", ["intp", "rk4", "benc"])
    lam = prob.cfg.spacing
    metrics, series = {"theta": theta}, {}
    if "intp" in methods:
        poly, rep, _ = solve_nonlinear(prob, _opt_cfg(params))
        x = prob.cfg.interval_nodes()
        metrics.update(intp=rep.intp, intp_g=rep.intp_g, opt_err=rep.opt_err,
                       iterations=rep.iterations)
        series.update(x=x, u_est=poly(x), y_exact=prob.exact_solution(x),
                      error=poly(x) - prob.exact_solution(x))
    for name, method in (("rk4", rk4), ("benc", benc)):
        if name in methods:
            x, y = method(prob, lam)
            metrics[name] = float(np.max(np.abs(y - prob.exact_solution(x))))
            series.setdefault("x", x)
            series[f"{name}_est"] = y
    metrics["max_abs_error"] = metrics.get("intp", metrics.get("rk4", metrics.get("benc")))
    return RunReport("", metrics, series)


def locality_series(params):
    """Normalised consecutive-error series ``{label: array}`` for one scenario."""
    cfg = _cfg(params)
    if params["func"] == "ode_test":
        prob = ode_test_problem(float(params["theta"]), cfg.s, cfg.e, cfg.p, cfg.q, cfg.r)
        out = {}
        methods = params.get("methods", ["intp", "rk4", "benc"])
        if "intp" in methods:
            poly, _, _ = solve_nonlinear(prob, _opt_cfg(params))
            x = cfg.interval_nodes()
            out["intp"] = consecutive_error_series(prob.exact_solution, poly, x)
        for name, method in (("rk4", rk4), ("benc", benc)):
            if name in methods:
                x, y = method(prob, cfg.spacing)
                out[name] = consecutive_error_series(prob.exact_solution, TableSampler(x, y), x)
        return out
    fn = _function(params)
    poly = extend_and_fit(fn.value, cfg)
    return {"fhat_M": consecutive_error_series(fn.value, poly, cfg.interval_nodes())}


def run_locality(params) -> RunReport:
    series = locality_series(params)
    metrics = {}
    for label, sr in series.items():
        metrics[f"{label}_alternation"] = sign_alternation_fraction(sr)
        metrics[f"{label}_longest_run"] = longest_same_sign_run(sr)
    return RunReport("", metrics, series)


_RUNNERS = {
    Kind.CUTOFF_TABLE: run_cutoff,
    Kind.PERIODIC_FIT: run_periodic,
    Kind.EXTENSION_FIT: run_extension,
    Kind.INTEGRAL: run_integral,
    Kind.LINEAR_ODE: run_linear,
    Kind.NONLINEAR_ODE: run_nonlinear,
    Kind.ERROR_LOCALITY: run_locality,
}


def run_scenario(sc: Scenario) -> RunReport:
    report = _RUNNERS[sc.kind](sc.params)
    report.scenario_id = sc.scenario_id
    if sc.output_path:
        write_series_csv(report, sc.output_path)
    return report


def load_scenarios(path) -> list[Scenario]:
    """Scenarios from a JSON file holding one object or a list of objects."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    items = data if isinstance(data, list) else [data]
    out = []
    for i, item in enumerate(items):
        if not isinstance(item, dict) or "kind" not in item:
            raise ValidationError(f"{path}: entry {i} needs a 'kind'")
        out.append(Scenario(item["kind"], dict(item.get("params", {})), item.get("output"),
                            item.get("id", "")))
    return out


def table_scenarios(table_id: str, p: Optional[int] = None, q: Optional[int] = None) -> list:
    """Canonical scenario list of a table; ``p``/``q`` override the grid for T3 to T5."""
    t = table_id.upper()
    if t not in TABLE_IDS:
        raise ValidationError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    grid = {"s": -1.0, "e": 1.0, "p": p or 7, "q": q or 8}
    if t == "T1":
        return [Scenario(Kind.CUTOFF_TABLE, {"q": qq, "r": r})
                for qq in (8, 10) for r in (0.1, 0.5, 1.0)]
    if t == "T2":
        return [Scenario(Kind.PERIODIC_FIT, {"func": "bump_d", "d": d, "M": m})
                for d in (1, 2) for m in (16, 64, 256, 1024)]
    if t == "T3":
        return ([Scenario(Kind.EXTENSION_FIT, {"func": "cos_theta", "theta": th, **grid})
                 for th in (1.0, 10.0, 100.0)]
                + [Scenario(Kind.EXTENSION_FIT, {"func": "power", "n": n, **grid})
                   for n in (4, 8, 10)])
    if t == "T4":
        return [Scenario(Kind.INTEGRAL, {"func": "power", "n": n, **grid}) for n in (4, 8, 10)]
    if t == "T5":
        return [Scenario(Kind.INTEGRAL, {"func": "cos_theta", "theta": th, **grid})
                for th in (1.0, 10.0, 100.0)]
    if t == "T6":
        return [Scenario(Kind.LINEAR_ODE, {"s": 1.0, "e": 3.0, "p": 7, "q": 8, "n": 2, "xi": y0})
                for y0 in (0.0, 1.0, 2.0)]
    return [Scenario(Kind.NONLINEAR_ODE, {"theta": th, "s": 1.0, "e": 3.0, "p": 6, "q": 7})
            for th in (math.pi / 2, 3 * math.pi / 2)]


_TABLE_COLUMNS = {
    "T1": ["q", "r", "max_abs_error"],
    "T2": ["M", "max_abs_error", "max_deriv_error", "eps_M"],
    "T3": ["EL(f_M)", "EL(fhat_M)", "EL(f'_M)", "EL(fhat'_M)", "EL(f''_M)", "EL(fhat''_M)"],
    "T4": ["exact", "spectral_estimate", "spectral_log10_error", "trapezoid_estimate",
           "trapezoid_log10_error", "simpson_estimate", "simpson_log10_error"],
    "T6": ["xi", "max_abs_error", "initial_error"],
    "T7": ["theta", "intp", "rk4", "benc", "intp_g", "opt_err", "iterations"],
}
_TABLE_COLUMNS["T5"] = _TABLE_COLUMNS["T4"]


def run_table(table_id: str, out_dir: Optional[str] = None, p=None, q=None) -> list[RunReport]:
    t = table_id.upper()
    reports = [run_scenario(sc) for sc in table_scenarios(t, p, q)]
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_reports_csv(reports, _TABLE_COLUMNS[t], os.path.join(out_dir, f"{t}.csv"))
    return reports


def format_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_reports_csv(reports, columns, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scenario"] + list(columns))
        for rep in reports:
            w.writerow([rep.scenario_id] + [format_number(rep.metrics.get(c, "")) for c in columns])


def write_series_csv(report: RunReport, path) -> None:
    """Equal-length series of a report as columns, e.g. ``x, f, fhat_M, error``."""
    cols = [k for k, v in report.series.items() if np.ndim(v) == 1]
    if not cols:
        raise ValidationError(f"{report.scenario_id}: no series to write")
    length = len(report.series[cols[0]])
    cols = [c for c in cols if len(report.series[c]) == length]
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for row in zip(*(report.series[c] for c in cols)):
            w.writerow([format_number(v) for v in row])
