"""Reaction-curve tuning of the thrust loop on the reference rig.

Holds the rig at an operating point, steps the voltage open loop, fits a
first-order-plus-dead-time model (two-point 28 %/63 % method) and prints
PI gains from the Ziegler-Nichols open-loop table and from the SIMC rule
with a chosen closed-loop time constant. The shipped defaults are the
SIMC gains, rounded.

    python scripts/tune_pid.py [--beta 9] [--thrust 0.52] [--tau-c 0.03]
"""

import argparse
import math

import numpy as np

from pitchopt import config
from pitchopt.motor import integrate


def reaction_curve(beta, thrust, cfg, step=0.05, seconds=1.5):
    plant = config.build_plant(cfg)
    plant.set_propeller(beta, thrust)
    state, model, motor = plant.state, plant.model, plant.motor
    v0 = motor.resistance * state.current + motor.kb * state.omega
    t0 = model.thrust(state.rps, beta)
    v1 = v0 * (1 + step)
    dt = plant.control_period
    ys = []
    for _ in range(round(seconds / dt)):
        state, _ = integrate(state, v1, beta, plant.dt, plant.substeps,
                             motor, model)
        ys.append(model.thrust(state.rps, beta))
    y = (np.array(ys) - t0)
    gain = y[-1] / (v1 - v0)
    t = dt * np.arange(1, len(y) + 1)
    t28 = np.interp(0.283 * y[-1], y, t)
    t63 = np.interp(0.632 * y[-1], y, t)
    tau = 1.5 * (t63 - t28)
    dead = max(t63 - tau, 0.0)
    return gain, tau, dead


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--beta", type=float, default=9.0, help="deg")
    ap.add_argument("--thrust", type=float, default=0.52, help="N")
    ap.add_argument("--tau-c", type=float, default=0.03,
                    help="SIMC closed-loop time constant, s")
    args = ap.parse_args(argv)
    gain, tau, dead = reaction_curve(math.radians(args.beta), args.thrust,
                                     config.load_config())
    print(f"K = {gain:.4g} N/V, tau = {tau * 1e3:.4g} ms, "
          f"L = {dead * 1e3:.3g} ms")
    if dead > 0:
        kp = 0.9 * tau / (gain * dead)
        print(f"ZN open loop PI: kp={kp:.4g} ki={kp / (3.33 * dead):.4g}")
    kp = tau / (gain * (args.tau_c + dead))
    ti = min(tau, 4 * (args.tau_c + dead))
    print(f"SIMC PI (tau_c={args.tau_c:g} s): kp={kp:.4g} ki={kp / ti:.4g}")


if __name__ == "__main__":
    main()
