"""Command line entry point: simulate, sweep and oracle subcommands.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import NumericalError, ValidationError
from .greens import TimeGrid, solve_greens
from .oracle import compare, discretize
from .scenarios import (PRESETS, SWEEP_PARAMS, environment, load_scenario, parse_values, run,
                        sweep)
from .spectral import build_kernels, make_environment

log = logging.getLogger("cavitherm")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


def _cmd_simulate(args):
    sc = load_scenario(args.config, args.preset)
    res = run(sc, args.out)
    d = res.manifest["diagnostics"]
    log.info("%s: %d steps, balance residual %.2e, %d flagged points -> %s", sc.name,
             sc.grid.n_steps, d["balance_relative_residual"], d["flagged_points"], args.out)
    return EXIT_OK


def _cmd_sweep(args):
    base = load_scenario(args.config, args.preset)
    index = sweep(base, args.param, parse_values(args.values), args.out, workers=args.workers)
    failed = [p for p in index["points"] if p["status"] != "ok"]
    for p in failed:
        log.warning("point %d (%s=%s) failed: %s", p["index"], args.param, p["value"], p["error"])
    log.info("%d/%d points ok -> %s", len(index["points"]) - len(failed), len(index["points"]),
             args.out)
    return EXIT_OK


def _cmd_oracle(args):
    sc = load_scenario(args.config, args.preset)
    full = environment(sc)
    # the finite bath carries the spin spectrum only, so the leakage is switched off
    env = make_environment(full.spin, 0.0, full.T0)
    bath = discretize(env, args.modes)
    horizon = args.horizon if args.horizon is not None else min(sc.horizon,
                                                                0.5 * bath.recurrence_time)
    dt = args.dt if args.dt is not None else sc.dt
    grid = TimeGrid(0.0, dt, int(math.floor(horizon / dt + 1e-9)) + 1)
    wc = sc.physical.omega_c
    sol = solve_greens(build_kernels(env, grid.dt, grid.n_steps, wc), grid, wc)
    report = compare(env, sol, args.modes)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report.to_csv(out / "oracle.csv")
    summary = {"preset": sc.name, "version": __version__, "kappa_used": 0.0, "dt": dt,
               "horizon": grid.horizon, **report.as_dict()}
    with open(out / "oracle_report.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    log.info("M=%d: max|du|=%.3e max|dv|=%.3e up to %.1f ns (recurrence %.1f ns)",
             report.M, report.u_deviation, report.v_deviation, report.compared_until,
             report.recurrence_time)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="cavitherm", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-q", "--quiet", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one scenario and write CSV traces")
    s.add_argument("--config", help="scenario JSON file")
    s.add_argument("--preset", help=f"named scenario ({', '.join(PRESETS)})")
    s.add_argument("--out", required=True)
    s.set_defaults(fn=_cmd_simulate)

    w = sub.add_parser("sweep", help="run a scenario over a list of parameter values")
    w.add_argument("--config")
    w.add_argument("--preset")
    w.add_argument("--param", required=True, choices=SWEEP_PARAMS)
    w.add_argument("--values", required=True, help="comma-separated, e.g. 1.72pi,17.2pi")
    w.add_argument("--out", required=True)
    w.add_argument("--workers", type=int, default=1)
    w.set_defaults(fn=_cmd_sweep)

    o = sub.add_parser("oracle", help="compare the solver with a finite discretised bath")
    o.add_argument("--preset", required=True)
    o.add_argument("--config")
    o.add_argument("--modes", type=int, required=True)
    o.add_argument("--out", required=True)
    o.add_argument("--dt", type=float)
    o.add_argument("--horizon", type=float)
    o.set_defaults(fn=_cmd_oracle)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s")
    try:
        return args.fn(args)
    except ValidationError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INVALID
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
