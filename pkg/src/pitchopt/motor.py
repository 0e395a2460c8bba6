"""Brushed DC motor driving the propeller load.

The armature obeys::

    I_m * domega/dt = k_b * i - B_1 * omega - Q(omega, beta)
    L   * di/dt     = v - R * i - k_b * omega

and is integrated with classical fixed-step RK4, the propeller torque being
re-evaluated at every stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import Diverged
from .propeller import TWO_PI, PropellerModel


@dataclass(frozen=True)
class MotorParams:
    inertia: float          # kg m^2
    kb: float               # V s/rad, also N m/A
    viscous_b1: float       # N m s/rad
    resistance: float       # Ohm
    inductance: float       # H
    voltage_limit: float    # V

    def __post_init__(self):
        for name in ("inertia", "kb", "resistance", "inductance",
                     "voltage_limit"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.viscous_b1 < 0:
            raise ValueError("viscous_b1 must be non-negative")

    def as_array(self) -> np.ndarray:
        return np.array([self.inertia, self.kb, self.viscous_b1,
                         self.resistance, self.inductance])


@dataclass(frozen=True)
class MotorState:
    omega: float = 0.0      # rad/s
    current: float = 0.0    # A

    @property
    def rps(self) -> float:
        return self.omega / TWO_PI

    @property
    def reversed(self) -> bool:
        """True while the shaft turns backwards (transient only)."""
        return self.omega < 0


def derivatives(state: MotorState, v_in: float, load_torque: float,
                params: MotorParams) -> tuple[float, float]:
    """Right-hand sides ``(domega/dt, di/dt)``."""
    domega = (params.kb * state.current - params.viscous_b1 * state.omega
              - load_torque) / params.inertia
    di = (v_in - params.resistance * state.current
          - params.kb * state.omega) / params.inductance
    return domega, di


def clamp_voltage(v_in: float, params: MotorParams) -> float:
    return min(max(v_in, 0.0), params.voltage_limit)


def integrate(state: MotorState, v_in: float, beta: float, dt: float,
              nsteps: int, params: MotorParams,
              load: PropellerModel) -> tuple[MotorState, float]:
    """``nsteps`` RK4 steps at a held input voltage.

    Returns the new state and the charge drawn (A*s) over the interval.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    omega, current, charge = kernels.rk4_advance(
        float(state.omega), float(state.current),
        clamp_voltage(v_in, params), float(beta), float(dt), int(nsteps),
        params.as_array(), load.nodes, load.chords, load.weights,
        load.aero_vector)
    if not (math.isfinite(omega) and math.isfinite(current)):
        raise Diverged(f"motor state diverged (omega={omega}, i={current})")
    return MotorState(omega, current), charge


def advance(state: MotorState, v_in: float, beta: float, dt: float,
            nsteps: int, params: MotorParams,
            load: PropellerModel) -> MotorState:
    """``nsteps`` RK4 steps of size ``dt`` at a held input voltage."""
    return integrate(state, v_in, beta, dt, nsteps, params, load)[0]


def step(state: MotorState, v_in: float, beta: float, dt: float,
         params: MotorParams, load: PropellerModel) -> MotorState:
    """One RK4 step; ``v_in`` is clamped to ``[0, voltage_limit]``."""
    return advance(state, v_in, beta, dt, 1, params, load)


def electrical_power(v_in: float, current: float) -> float:
    return v_in * current


def power_limited_voltage(omega: float, power_ceiling: float,
                          params: MotorParams) -> float:
    """Largest voltage whose steady armature current keeps ``v*i`` at the
    ceiling for the present shaft speed.

    Solves ``v * (v - k_b*omega) / R = P``. Depending on the slow shaft
    speed rather than the fast current keeps a sampled limiter from
    chattering.
    """
    e = params.kb * omega
    return 0.5 * (e + math.sqrt(e * e + 4.0 * params.resistance
                                * power_ceiling))


def steady_state(v_in: float, beta: float, params: MotorParams,
                 load: PropellerModel, dt: float = 2e-4,
                 chunk: float = 0.5, max_time: float = 30.0,
                 rtol: float = 1e-10) -> MotorState:
    """Run at constant voltage from rest until the state stops moving."""
    state = MotorState()
    n = max(1, round(chunk / dt))
    t = 0.0
    while t < max_time:
        new = advance(state, v_in, beta, dt, n, params, load)
        t += n * dt
        scale = max(abs(new.omega), 1e-12)
        if abs(new.omega - state.omega) <= rtol * scale:
            return new
        state = new
    return state
