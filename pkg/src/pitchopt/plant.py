"""The ``set_propeller`` port and its simulated implementation.

An optimizer only sees :class:`Plant`: command a pitch and a thrust, get
back a settled measurement. :class:`SimulatedPlant` closes the PID thrust
loop around the motor and propeller models; a hardware rig would implement
the same method over its serial link.

The simulated controller runs at a fixed control period (1 kHz by default)
with the motor integrated in between at a finer RK4 step. Voltage is held
between control ticks, so refining the integration step converges to one
trajectory.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, Protocol

import numpy as np

from .control import Calibration, PidGains, PidState, RampCommand, pid_step
from .control.pid import ramp_value
from .errors import BetaOutOfRange, NoSettle
from .motor import (MotorParams, MotorState, electrical_power, integrate,
                    power_limited_voltage)
from .propeller import TWO_PI, PropellerModel


@dataclass(frozen=True)
class SettledMeasurement:
    power: float        # W, window average
    thrust: float       # N, window average
    rps: float
    saturated: bool
    settle_time: float  # s of simulated time spent in the call


@dataclass(frozen=True)
class PlantLimits:
    power_ceiling: float = 14.0
    beta_range: tuple[float, float] = (math.radians(-5.0), math.radians(40.0))
    settle_tolerance: float = 0.02
    settle_window: float = 0.5
    measure_window: float = 0.5
    timeout: float = 20.0
    thrust_floor: float = 1e-3  # N; band half-width never below this

    def __post_init__(self):
        if not self.power_ceiling > 0:
            raise ValueError("power_ceiling must be positive")
        lo, hi = self.beta_range
        if not lo < hi:
            raise ValueError("beta_range must be ordered")
        if not 0 < self.settle_tolerance < 1:
            raise ValueError("settle_tolerance must lie in (0, 1)")
        if min(self.settle_window, self.measure_window, self.timeout) <= 0:
            raise ValueError("windows and timeout must be positive")

    def band(self, thrust_c: float) -> float:
        return max(self.settle_tolerance * thrust_c, self.thrust_floor)


@dataclass(frozen=True)
class TelemetrySample:
    t: float
    thrust_cmd: float
    thrust_meas: float
    rpm: float
    voltage: float      # held over the tick
    current: float      # at the start of the tick
    power: float        # mean electrical power over the tick
    limited: bool


class Plant(Protocol):
    def set_propeller(self, beta: float, thrust_c: float) -> SettledMeasurement:
        ...


_BETA_SLACK = 1e-12


class SimulatedPlant:
    """Motor + propeller + PID thrust loop behind the ``Plant`` port.

    State (shaft speed, current, controller memory, last thrust command)
    persists between calls. Use :meth:`fresh` for an identical plant at
    rest.

    Parameters
    ----------
    model, motor, gains
        Propeller model, motor constants and PID gains.
    limits
        Power ceiling, pitch range and settling policy.
    dt
        RK4 step, s. Must divide ``control_period``.
    control_period
        Controller sample time, s.
    ramp_duration
        Time over which a new thrust command is ramped in, s.
    noise
        Half-width of uniform noise on measured thrust, N.
    telemetry
        Optional callback receiving one :class:`TelemetrySample` per tick.
    """

    def __init__(self, model: PropellerModel, motor: MotorParams,
                 gains: PidGains, limits: PlantLimits = PlantLimits(),
                 calibration: Calibration = Calibration(), dt: float = 1e-4,
                 control_period: float = 1e-3, ramp_duration: float = 1.6,
                 noise: float = 0.0, seed: int = 0,
                 telemetry: Callable[[TelemetrySample], None] | None = None):
        self.model = model
        self.motor = motor
        self.gains = gains
        self.limits = limits
        self.calibration = calibration
        self.dt = dt
        self.control_period = control_period
        self.ramp_duration = ramp_duration
        self.noise = noise
        self.seed = seed
        self.telemetry = telemetry
        self.substeps = round(control_period / dt)
        if self.substeps < 1 or not math.isclose(
                self.substeps * dt, control_period, rel_tol=1e-9):
            raise ValueError("dt must divide the control period")
        if noise < 0:
            raise ValueError("noise amplitude must be non-negative")
        self._rng = np.random.default_rng(seed)
        self.state = MotorState()
        self.pid = PidState()
        self.beta = 0.0
        self.command = 0.0
        self.time = 0.0
        self.calls = 0

    def fresh(self, **overrides) -> "SimulatedPlant":
        """A new plant at rest with this configuration (and overrides)."""
        kw = dict(model=self.model, motor=self.motor, gains=self.gains,
                  limits=self.limits, calibration=self.calibration,
                  dt=self.dt, control_period=self.control_period,
                  ramp_duration=self.ramp_duration, noise=self.noise,
                  seed=self.seed, telemetry=self.telemetry)
        kw.update(overrides)
        return SimulatedPlant(**kw)

    def with_limits(self, **changes) -> "SimulatedPlant":
        return self.fresh(limits=replace(self.limits, **changes))

    # -- one control tick -------------------------------------------------

    def measure_thrust(self) -> float:
        true = self.model.thrust(self.state.rps, self.beta)
        if self.noise:
            true += self._rng.uniform(-self.noise, self.noise)
        cal = self.calibration
        return cal.newtons(cal.load_cell_for(true))

    def _tick(self, ramp: RampCommand, t_local: float) -> TelemetrySample:
        cmd = ramp_value(ramp, t_local)
        meas = self.measure_thrust()
        v_pid = pid_step(self.gains, self.pid, cmd - meas,
                         self.control_period, measurement=meas,
                         output_limit=self.motor.voltage_limit)
        v_cap = power_limited_voltage(self.state.omega,
                                      self.limits.power_ceiling, self.motor)
        v = min(v_pid, v_cap)
        limited = v_pid >= self.motor.voltage_limit or v_cap < v_pid
        start = self.state
        self.state, charge = integrate(start, v, self.beta, self.dt,
                                       self.substeps, self.motor, self.model)
        sample = TelemetrySample(
            t=self.time, thrust_cmd=cmd, thrust_meas=meas,
            rpm=60.0 * start.rps, voltage=v, current=start.current,
            power=electrical_power(v, charge / self.control_period),
            limited=limited)
        self.time += self.control_period
        if self.telemetry is not None:
            self.telemetry(sample)
        return sample

    def _begin(self, beta: float, thrust_c: float) -> RampCommand:
        lo, hi = self.limits.beta_range
        if not lo - _BETA_SLACK <= beta <= hi + _BETA_SLACK:
            raise BetaOutOfRange(
                f"beta {math.degrees(beta):.4g} deg outside "
                f"[{math.degrees(lo):.4g}, {math.degrees(hi):.4g}] deg")
        if thrust_c < 0:
            raise ValueError("thrust command must be non-negative")
        self.beta = min(max(beta, lo), hi)
        ramp = RampCommand(thrust_c, self.ramp_duration, start=self.command)
        self.command = thrust_c
        return ramp

    # -- port ---------------------------------------------------------------

    def set_propeller(self, beta: float, thrust_c: float) -> SettledMeasurement:
        """Hold ``(beta, thrust_c)`` until the loop settles or saturates.

        Settling means the measured thrust stayed inside the tolerance band
        for a whole settle window once the command ramp ended. Power and
        thrust are then averaged over a following measurement window, which
        keeps the flywheel energy released by the speed change out of the
        reading; leaving the band during it restarts settling. Saturation
        means the voltage or power ceiling bound for a whole settle window,
        and is reported with that window's averages.
        """
        ramp = self._begin(beta, thrust_c)
        self.calls += 1
        lim = self.limits
        period = self.control_period
        window = max(1, round(lim.settle_window / period))
        measure = max(1, round(lim.measure_window / period))
        band = lim.band(thrust_c)
        recent: deque[TelemetrySample] = deque(maxlen=window)
        taken: list[TelemetrySample] = []
        in_band = 0
        bound = 0
        ramped = ramp.start == ramp.target
        for tick in range(round(lim.timeout / period)):
            s = self._tick(ramp, tick * period)
            recent.append(s)
            ramped = ramped or tick * period >= ramp.duration
            bound = bound + 1 if ramped and s.limited else 0
            if bound >= window:
                return self._report(recent, True, tick + 1)
            if not (ramped and abs(s.thrust_meas - thrust_c) <= band):
                in_band = 0
                taken.clear()
            elif in_band < window:
                in_band += 1
            else:
                taken.append(s)
                if len(taken) >= measure:
                    return self._report(taken, False, tick + 1)
        raise NoSettle(
            f"no settle within {lim.timeout:g} s at beta="
            f"{math.degrees(self.beta):.4g} deg, T_c={thrust_c:g} N")

    def _report(self, samples, saturated: bool,
                ticks: int) -> SettledMeasurement:
        return SettledMeasurement(
            power=float(np.mean([x.power for x in samples])),
            thrust=float(np.mean([x.thrust_meas for x in samples])),
            rps=float(np.mean([x.rpm for x in samples])) / 60.0,
            saturated=saturated,
            settle_time=ticks * self.control_period)

    def run(self, beta: float, thrust_c: float,
            duration: float) -> list[TelemetrySample]:
        """Fixed-pitch closed loop for ``duration`` seconds; every tick."""
        ramp = self._begin(beta, thrust_c)
        ticks = round(duration / self.control_period)
        return [self._tick(ramp, k * self.control_period)
                for k in range(ticks)]


def steady_electrical_power(model: PropellerModel, motor: MotorParams,
                            beta: float, thrust_c: float) -> float:
    """Input power of the motor holding ``thrust_c`` in steady state.

    Aerodynamic power plus copper and viscous losses; no supply limits.
    """
    n = model.solve_speed_for_thrust(beta, thrust_c)
    omega = TWO_PI * n
    q = model.torque(n, beta)
    i = (q + motor.viscous_b1 * omega) / motor.kb
    v = motor.resistance * i + motor.kb * omega
    return v * i
