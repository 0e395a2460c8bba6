"""Affine sensor and actuator calibrations of the test rig.

Defaults are the regression constants measured on the bench:

* supply voltage  ``v = 0.0202 * v_an - 0.0237``  (V)
* motor current   ``i = 4.1532 * i_an - 1826.67``  (mA)
* load cell       ``T = 9.81 * (4.11 * v_out - 49.36) / 1000``  (N)
* pitch servo     ``beta = 0.59 * (v_servo - 135)``  (deg)
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class AffineMap:
    """``y = scale * x + offset`` with its exact inverse."""

    scale: float
    offset: float = 0.0

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("calibration scale must be non-zero")

    def __call__(self, raw):
        return self.scale * raw + self.offset

    def inverse(self, value):
        return (value - self.offset) / self.scale

    @classmethod
    def about(cls, scale: float, zero: float) -> "AffineMap":
        """Map written as ``scale * (x - zero)``; exactly 0 at ``x = zero``."""
        return cls(scale, -(scale * zero))


def _thrust_default():
    return AffineMap(9.81 * 4.11 / 1000, -(9.81 * 49.36 / 1000))


@dataclass(frozen=True)
class Calibration:
    supply_voltage: AffineMap = field(
        default_factory=lambda: AffineMap(0.0202, -0.0237))
    current_ma: AffineMap = field(
        default_factory=lambda: AffineMap(4.1532, -1826.67))
    thrust: AffineMap = field(default_factory=_thrust_default)
    pitch_deg: AffineMap = field(
        default_factory=lambda: AffineMap.about(0.59, 135.0))

    def volts(self, raw):
        return self.supply_voltage(raw)

    def milliamps(self, raw):
        return self.current_ma(raw)

    def newtons(self, v_out):
        return self.thrust(v_out)

    def degrees(self, v_servo):
        return self.pitch_deg(v_servo)

    def servo_for(self, beta_deg):
        return self.pitch_deg.inverse(beta_deg)

    def load_cell_for(self, thrust_n):
        return self.thrust.inverse(thrust_n)
