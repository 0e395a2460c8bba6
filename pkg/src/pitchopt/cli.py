"""``pitchopt`` command line: model sweeps, simulated runs and optimizer
traces, all written as CSV.

Angles are in degrees on the command line and in the CSV files. Data go to
``--output`` (default stdout); diagnostics go to stderr.

Examples
--------
    pitchopt sweep --thrust 0.3 --airspeeds 1,4,10 --beta-range 1:30:0.5
    pitchopt surface --power-range 0.5:14:0.5 --beta-range 1:30:1 --airspeed 3
    pitchopt optimize --algorithm variable --output trace.csv
    pitchopt simulate --beta 9 --thrust 0.32 --duration 10
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from contextlib import contextmanager
from dataclasses import replace

import numpy as np

from . import config
from .errors import NonMonotonic, PitchOptError, Unachievable
from .optimizer import fixed_step_optimize, variable_step_optimize


def parse_range(text: str) -> np.ndarray:
    """``lo:hi:step`` inclusive of ``hi`` (to rounding), or a single value."""
    parts = text.split(":")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
    if len(values) == 1:
        return np.array(values)
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"range {text!r} is not lo:hi:step")
    lo, hi, step = values
    if not step > 0 or hi < lo or not all(map(math.isfinite, values)):
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def parse_list(text: str) -> list[float]:
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


@contextmanager
def _sink(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _writer(fh, header):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    return w


def _load(args, **extra):
    overrides = dict(extra)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.noise is not None:
        overrides["noise_n"] = args.noise
    return config.load_config(args.config, **overrides)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    betas = args.beta_range
    with _sink(args.output) as fh:
        w = _writer(fh, ["V", "beta_deg", "power_W", "rps", "achievable"])
        for v in args.airspeeds:
            model = config.build_model(cfg, airspeed=v)
            for b in betas:
                try:
                    n = model.solve_speed_for_thrust(math.radians(b),
                                                     args.thrust)
                    p = model.power(n, math.radians(b))
                    w.writerow([v, b, p, n, 1])
                except (Unachievable, NonMonotonic):
                    w.writerow([v, b, "", "", 0])
    return 0


def cmd_surface(args) -> int:
    cfg = _load(args)
    model = config.build_model(cfg, airspeed=args.airspeed)
    with _sink(args.output) as fh:
        w = _writer(fh, ["power_W", "beta_deg", "thrust_N"])
        for p in args.power_range:
            for b in args.beta_range:
                try:
                    t = model.thrust_from_power(math.radians(b), p)
                except (Unachievable, NonMonotonic):
                    t = ""
                w.writerow([p, b, t])
    return 0


def cmd_optimize(args) -> int:
    cfg = _load(args)
    opt = config.build_optimizer(cfg, args.algorithm)
    changes = {}
    if args.max_iterations is not None:
        changes["max_iterations"] = args.max_iterations
    if args.max_time is not None:
        changes["max_time"] = args.max_time if args.max_time > 0 else None
    if args.converge is not None:
        changes["convergence_reversals"] = args.converge
    if changes:
        opt = replace(opt, **changes)
    plant = config.build_plant(cfg)
    run = fixed_step_optimize if args.algorithm == "fixed" \
        else variable_step_optimize
    header = ["iter", "t_s", "beta_deg", "power_W", "thrust_N", "direction",
              "step_deg", "saturated"]
    with _sink(args.output) as fh:
        w = _writer(fh, header)
        try:
            trace = run(plant, opt)
        except PitchOptError as exc:
            trace = getattr(exc, "trace", None)
            _emit(w, trace)
            print(f"pitchopt: plant error: {exc}", file=sys.stderr)
            return 1
        _emit(w, trace)
    if trace.records:
        last = trace.terminal
        print(f"{trace.algorithm}: terminal beta {math.degrees(last.beta):.4g}"
              f" deg, power {last.power:.5g} W, {trace.plant_calls} plant "
              f"calls, stop={trace.stop_reason}", file=sys.stderr)
    else:
        print(f"{trace.algorithm}: no plant calls within budget",
              file=sys.stderr)
    return 0


def _emit(w, trace):
    if trace is None:
        return
    for r in trace.records:
        w.writerow([r.iteration, r.time, math.degrees(r.beta), r.power,
                    r.thrust, r.direction, math.degrees(r.step),
                    int(r.saturated)])


def cmd_simulate(args) -> int:
    cfg = _load(args)
    plant = config.build_plant(cfg)
    try:
        samples = plant.run(math.radians(args.beta), args.thrust,
                            args.duration)
    except PitchOptError as exc:
        print(f"pitchopt: {exc}", file=sys.stderr)
        return 1
    with _sink(args.output) as fh:
        w = _writer(fh, ["t_s", "T_cmd_N", "T_meas_N", "rpm", "v_V", "i_A",
                         "power_W"])
        for s in samples:
            w.writerow([s.t, s.thrust_cmd, s.thrust_meas, s.rpm, s.voltage,
                        s.current, s.power])
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="parameter file overlaid on the "
                        "reference rig")
    common.add_argument("--output", "-o", help="CSV path (default stdout)")
    common.add_argument("--seed", type=int, help="noise seed")
    common.add_argument("--noise", type=float,
                        help="uniform thrust-measurement noise half-width, N")

    ap = argparse.ArgumentParser(
        prog="pitchopt", description="Variable-pitch propeller simulation "
        "and online pitch optimization.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", parents=[common],
                       help="required power versus pitch at fixed thrust")
    p.add_argument("--thrust", type=float, required=True, help="N")
    p.add_argument("--airspeeds", type=parse_list, default=[0.0],
                   help="comma separated, m/s")
    p.add_argument("--beta-range", type=parse_range, required=True,
                   help="lo:hi:step, deg")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("surface", parents=[common],
                       help="thrust over a (power, pitch) grid")
    p.add_argument("--power-range", type=parse_range, required=True,
                   help="lo:hi:step, W")
    p.add_argument("--beta-range", type=parse_range, required=True,
                   help="lo:hi:step, deg")
    p.add_argument("--airspeed", type=float, default=0.0, help="m/s")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("optimize", parents=[common],
                       help="run a pitch optimizer on the simulated plant")
    p.add_argument("--algorithm", choices=("fixed", "variable"),
                   default="fixed")
    p.add_argument("--max-iterations", type=int,
                   help="plant-call budget (0 writes only the header)")
    p.add_argument("--max-time", type=float,
                   help="simulated-seconds budget; 0 disables")
    p.add_argument("--converge", type=int, metavar="K",
                   help="stop after K turn-arounds at the minimum step")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", parents=[common],
                       help="fixed-pitch closed-loop time series")
    p.add_argument("--beta", type=float, required=True, help="deg")
    p.add_argument("--thrust", type=float, required=True, help="N")
    p.add_argument("--duration", type=float, default=10.0, help="s")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "max_iterations", None) is not None \
            and args.max_iterations < 0:
        ap.error("--max-iterations must be non-negative")
    if getattr(args, "duration", 1.0) <= 0:
        ap.error("--duration must be positive")
    try:
        return args.func(args)
    except (PitchOptError, ValueError, OSError) as exc:
        print(f"pitchopt: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
