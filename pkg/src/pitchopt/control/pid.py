"""Thrust-loop PID and saturated ramp commands."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PidGains:
    """Gains in volts per newton of thrust error (and its integral/rate).

    ``integral_limit`` bounds the integral contribution, in volts.
    """

    kp: float
    ki: float
    kd: float = 0.0
    integral_limit: float = 12.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0:
            raise ValueError("PID gains must be non-negative")
        if not self.integral_limit > 0:
            raise ValueError("integral_limit must be positive")


@dataclass
class PidState:
    integral: float = 0.0
    last_measurement: float | None = None


def pid_step(gains: PidGains, state: PidState, error: float, dt: float,
             measurement: float | None = None,
             output_limit: float = float("inf")) -> float:
    """Advance the controller by ``dt`` and return the voltage command.

    Positional form with a clamped integral and the derivative taken on the
    measurement, so set-point ramps do not kick the output. ``state`` is
    updated in place. The result lies in ``[0, output_limit]``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    lim = gains.integral_limit
    state.integral = min(max(state.integral + gains.ki * error * dt, -lim), lim)
    derivative = 0.0
    if measurement is not None:
        if state.last_measurement is not None:
            derivative = -(measurement - state.last_measurement) / dt
        state.last_measurement = measurement
    out = gains.kp * error + state.integral + gains.kd * derivative
    return min(max(out, 0.0), output_limit)


@dataclass(frozen=True)
class RampCommand:
    """Linear ramp from ``start`` to ``target`` held after ``duration``."""

    target: float
    duration: float = 1.6
    start: float = 0.0

    def __post_init__(self):
        if self.target < 0 or self.start < 0:
            raise ValueError("thrust commands must be non-negative")
        if not self.duration > 0:
            raise ValueError("ramp duration must be positive")


def ramp_value(cmd: RampCommand, t: float) -> float:
    if t < 0:
        raise ValueError("t must be non-negative")
    if t >= cmd.duration:
        return cmd.target
    return cmd.start + (cmd.target - cmd.start) * t / cmd.duration
