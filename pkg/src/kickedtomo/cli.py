"""Command-line front end.

    kickedtomo <command> --config <file> [--out <dir>]

Commands: trajectory, moments, tomogram, squeezing, verify, and ``run``,
which emits every artifact named in the scenario's ``outputs`` list (all of
them when the list is empty). CSV goes to ``<dir>/<command>.csv`` when
``--out`` is given, otherwise to stdout.
Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import moments as mom
from . import tomography as tomo
from .oracle import IntegrationError, QuadratureError, minimize_k2_numeric, quadrature
from .scenario import OUTPUTS, ConfigError, Scenario, load_scenario
from .trajectory import (
    Regime,
    RegimeError,
    classify_regime,
    effective_frequency,
    epsilon_closed,
    trajectory_series,
    wronskian,
)
from .verify import default_scenarios, verify_scenario

log = logging.getLogger("kickedtomo")

COMMANDS = ("trajectory", "moments", "tomogram", "squeezing", "verify", "run")


def fmt(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return format(float(x), ".17g")


def write_csv(columns, rows, sc: Scenario, command: str, out: Path | None) -> None:
    buf = io.StringIO()
    buf.write(f"# kickedtomo {command} scenario={sc.name} sha256={sc.digest}\n")
    buf.write("# " + ",".join(columns) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    if out is None:
        sys.stdout.write(buf.getvalue())
    else:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{command}.csv").write_text(buf.getvalue(), encoding="utf-8")


def cmd_trajectory(sc: Scenario):
    p = sc.params
    omega = effective_frequency(p)
    rows = []
    for pt in trajectory_series(p, sc.time_grid):
        defect = abs(wronskian(pt, p.gamma) - 2j * omega)
        rows.append((pt.t, pt.eps.real, pt.eps.imag, pt.eps_dot.real, pt.eps_dot.imag, defect))
    return ["t", "re_eps", "im_eps", "re_eps_dot", "im_eps_dot", "wronskian_defect"], rows


def cmd_moments(sc: Scenario):
    p = sc.params
    omega = effective_frequency(p)
    rows = []
    for pt in trajectory_series(p, sc.time_grid):
        s = mom.GaussianState.from_point(pt, sc.alpha, p.gamma, omega)
        rows.append(
            (
                pt.t,
                s.second.sigma_qq,
                s.second.sigma_pp,
                s.second.sigma_qp,
                s.first.mean_q,
                s.first.mean_p,
                s.second.determinant - 0.25,
            )
        )
    return ["t", "sigma_qq", "sigma_pp", "sigma_qp", "mean_q", "mean_p", "uncertainty_defect"], rows


def cmd_tomogram(sc: Scenario):
    p = sc.params
    omega = effective_frequency(p)
    state = mom.GaussianState.from_point(epsilon_closed(p, sc.tomogram_t), sc.alpha, p.gamma, omega)
    x = sc.x_grid
    values = tomo.tomogram_grid(state, sc.frames, x)
    rows = []
    for f, row in zip(sc.frames, values):
        sl = tomo.gaussian_slice(state, f)
        sd = math.sqrt(sl.variance)
        total = quadrature(lambda v: tomo.tomogram_value(sl, v), sl.mean - 12 * sd, sl.mean + 12 * sd, 1e-10)
        rows.append((f.mu, f.nu, sl.mean, sl.variance, abs(total - 1), *row))
    columns = ["mu", "nu", "mean", "variance", "norm_defect"] + [f"w(X={fmt(v)})" for v in x]
    return columns, rows


def cmd_squeezing(sc: Scenario):
    p = sc.params
    regime = classify_regime(p)
    t = sc.time_grid
    k2 = np.array([abs(pt.eps) ** 2 for pt in trajectory_series(p, t)])
    closed = [math.nan] * t.size
    extra_name, extra = None, None
    if p.single_kick_at_zero:
        post = t >= 0
        if regime is Regime.WEAK:
            closed_vals = 2 * mom.dispersion_weak_closed(p, t[post])
            extra_name = f"k2_lower_limit_n{sc.period}"
            extra = mom.min_squeezing_weak(p, sc.period).closed_form
        elif regime is Regime.STRONG:
            closed_vals = 2 * mom.dispersion_strong_closed(p, t[post])
        else:
            closed_vals = mom.k2_free_closed(p, t[post])
        closed = np.full(t.size, math.nan)
        closed[post] = closed_vals
    columns = ["t", "k2", "k2_closed"]
    if extra_name:
        columns.append(extra_name)
    rows = []
    for i in range(t.size):
        row = [t[i], k2[i], closed[i]]
        if extra_name:
            row.append(extra)
        rows.append(row)
    if t.size > 1:
        t_star, k2_min = minimize_k2_numeric(p, t[0], t[-1])
        log.info("minimum k2 = %.12g at t = %.12g", k2_min, t_star)
    return columns, rows


HANDLERS = {
    "trajectory": cmd_trajectory,
    "moments": cmd_moments,
    "tomogram": cmd_tomogram,
    "squeezing": cmd_squeezing,
}


def cmd_verify(scenarios: list[Scenario], out: Path | None) -> int:
    started = time.perf_counter()
    all_checks = []
    for sc in scenarios:
        all_checks.extend(verify_scenario(sc))
    width = max(len(c.scenario) for c in all_checks)
    name_w = max(len(c.name) for c in all_checks)
    lines = [f"{'scenario':<{width}}  {'check':<{name_w}}  {'value':>12}  {'tol':>8}  result"]
    for c in all_checks:
        lines.append(
            f"{c.scenario:<{width}}  {c.name:<{name_w}}  {c.value:12.3e}  {c.tolerance:8.0e}  {'PASS' if c.passed else 'FAIL'}"
        )
    failed = [c for c in all_checks if not c.passed]
    lines.append(f"{len(all_checks) - len(failed)}/{len(all_checks)} checks passed in {time.perf_counter() - started:.2f} s")
    report = "\n".join(lines) + "\n"
    print(report, end="")
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify.txt").write_text(report, encoding="utf-8")
    return 2 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kickedtomo", description="Delta-kicked damped oscillator: closed forms checked against an ODE oracle")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", type=Path, help="scenario file (optional for verify: runs the default matrix)")
    ap.add_argument("--out", type=Path, default=None, help="output directory (default: stdout)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.command == "verify":
            scenarios = [load_scenario(args.config)] if args.config else default_scenarios()
            for sc in scenarios:
                classify_regime(sc.params)
            return cmd_verify(scenarios, args.out)
        if args.config is None:
            ap.print_usage(sys.stderr)
            print(f"kickedtomo: error: {args.command} needs --config", file=sys.stderr)
            return 1
        sc = load_scenario(args.config)
        classify_regime(sc.params)
        if args.command != "run":
            columns, rows = HANDLERS[args.command](sc)
            write_csv(columns, rows, sc, args.command, args.out)
            return 0
        wanted = sc.outputs or OUTPUTS
        if args.out is None and len(wanted) > 1:
            print("kickedtomo: error: run with several outputs needs --out", file=sys.stderr)
            return 1
        status = 0
        for name in wanted:
            if name == "verify":
                status = max(status, cmd_verify([sc], args.out))
            else:
                write_csv(*HANDLERS[name](sc), sc, name, args.out)
        return status
    except (ConfigError, RegimeError) as exc:
        print(f"kickedtomo: error: {exc}", file=sys.stderr)
        return 1
    except (IntegrationError, QuadratureError, ArithmeticError, mom.ConventionError) as exc:
        print(f"kickedtomo: verification failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
