"""Thrust control loop pieces and rig calibration maps."""

from .calibration import AffineMap, Calibration
from .pid import PidGains, PidState, RampCommand, pid_step, ramp_value

__all__ = ["AffineMap", "Calibration", "PidGains", "PidState",
           "RampCommand", "pid_step", "ramp_value"]
