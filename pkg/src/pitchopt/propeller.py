"""Blade-element model of a variable-pitch propeller.

Sections see the resultant of the axial inflow ``V`` and the rotational
speed ``2*pi*r*n``; their lift and drag are resolved into an axial
(thrust) and a tangential (torque) component and integrated along the span
with composite Simpson quadrature. Induced inflow, tip losses and stall are
not modelled: the lift curve is linear for every angle of attack.

All angles are radians and speeds are revolutions per second unless a name
says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import NonMonotonic, Unachievable

TWO_PI = 2.0 * math.pi

DEFAULT_STATIONS = 256
DEFAULT_N_MAX = 500.0  # rev/s
_N_START = 50.0
_SCAN_POINTS = 64


@dataclass(frozen=True)
class BladeGeometry:
    """Diameter, blade count and a piecewise-linear chord table.

    ``chord_stations`` holds ``(r, c)`` pairs in metres with strictly
    increasing radii inside ``[0, diameter/2]``.
    """

    diameter: float
    blade_count: int
    chord_stations: tuple[tuple[float, float], ...]

    def __post_init__(self):
        stations = tuple((float(r), float(c)) for r, c in self.chord_stations)
        object.__setattr__(self, "chord_stations", stations)
        if not self.diameter > 0:
            raise ValueError("diameter must be positive")
        if int(self.blade_count) != self.blade_count or self.blade_count < 1:
            raise ValueError("blade_count must be a positive integer")
        if len(stations) < 2:
            raise ValueError("chord table needs at least two stations")
        radii = [r for r, _ in stations]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("chord table radii must be strictly increasing")
        if radii[0] < 0 or radii[-1] > self.diameter / 2:
            raise ValueError("chord table radii must lie in [0, d/2]")
        if any(c < 0 for _, c in stations):
            raise ValueError("chords must be non-negative")

    @property
    def radius(self) -> float:
        return self.diameter / 2

    def chord(self, r):
        """Linearly interpolated chord at radius ``r`` (scalar or array)."""
        radii, chords = zip(*self.chord_stations)
        return np.interp(r, radii, chords)


@dataclass(frozen=True)
class AeroModel:
    """Linear lift curve with a parabolic drag polar.

    ``C_L = lift_slope * (alpha - zero_lift_alpha)`` and
    ``C_D = parasite_cd + induced_k * C_L**2``.
    """

    lift_slope: float
    zero_lift_alpha: float = 0.0
    parasite_cd: float = 0.0
    induced_k: float = 0.0

    def __post_init__(self):
        if not self.lift_slope > 0:
            raise ValueError("lift_slope must be positive")
        if self.parasite_cd < 0 or self.induced_k < 0:
            raise ValueError("drag coefficients must be non-negative")


@dataclass(frozen=True)
class Environment:
    air_density: float = 1.225
    airspeed: float = 0.0

    def __post_init__(self):
        if not self.air_density > 0:
            raise ValueError("air_density must be positive")
        if self.airspeed < 0:
            raise ValueError("airspeed must be non-negative")


@dataclass(frozen=True)
class OperatingPoint:
    rps: float
    pitch: float

    def __post_init__(self):
        if self.rps < 0:
            raise ValueError("rps must be non-negative")


def section_speed_squared(r: float, n: float, env: Environment) -> float:
    """Squared resultant section speed ``V**2 + (2*pi*r*n)**2``."""
    return env.airspeed ** 2 + (TWO_PI * r * n) ** 2


def inflow_angle(r: float, n: float, env: Environment) -> float:
    """Angle of the resultant velocity above the rotation plane.

    A section with no velocity at all gets 0 by convention.
    """
    return math.atan2(env.airspeed, TWO_PI * r * n)


def section_coefficients(alpha: float, aero: AeroModel) -> tuple[float, float]:
    cl = aero.lift_slope * (alpha - aero.zero_lift_alpha)
    return cl, aero.parasite_cd + aero.induced_k * cl * cl


def simpson_nodes(geom: BladeGeometry, stations: int = DEFAULT_STATIONS):
    """Quadrature nodes, chords and weights over the chord table.

    ``stations`` intervals are shared among the table segments in
    proportion to their length (each segment gets an even count of at
    least two), so chord kinks always fall on nodes.
    """
    if stations < 2:
        raise ValueError("need at least two quadrature intervals")
    radii = np.array([r for r, _ in geom.chord_stations])
    span = radii[-1] - radii[0]
    rs, ws = [], []
    for a, b in zip(radii[:-1], radii[1:]):
        m = max(2, 2 * round(stations * (b - a) / span / 2))
        x = np.linspace(a, b, m + 1)
        wt = np.ones(m + 1)
        wt[1:-1:2] = 4.0
        wt[2:-1:2] = 2.0
        wt *= (b - a) / m / 3.0
        if rs:
            ws[-1][-1] += wt[0]
            x, wt = x[1:], wt[1:]
        rs.append(x)
        ws.append(wt)
    r = np.ascontiguousarray(np.concatenate(rs))
    w = np.ascontiguousarray(np.concatenate(ws))
    c = np.ascontiguousarray(geom.chord(r), dtype=float)
    return r, c, w


@dataclass
class PropellerModel:
    """Geometry, aerodynamics and flight condition with cached quadrature.

    Methods take the shaft speed in rev/s and the pitch in radians.
    """

    geometry: BladeGeometry
    aero: AeroModel
    env: Environment = field(default_factory=Environment)
    stations: int = DEFAULT_STATIONS
    n_max: float = DEFAULT_N_MAX

    def __post_init__(self):
        self.nodes, self.chords, self.weights = simpson_nodes(
            self.geometry, self.stations)
        self.aero_vector = np.array([
            self.env.air_density, float(self.geometry.blade_count),
            self.aero.lift_slope, self.aero.zero_lift_alpha,
            self.aero.parasite_cd, self.aero.induced_k, self.env.airspeed,
        ])

    def with_airspeed(self, airspeed: float) -> "PropellerModel":
        return PropellerModel(self.geometry, self.aero,
                              Environment(self.env.air_density, airspeed),
                              self.stations, self.n_max)

    def loads(self, n: float, beta: float) -> tuple[float, float]:
        """``(thrust [N], torque [N*m])`` at ``n`` rev/s."""
        return kernels.bet_loads(self.nodes, self.chords, self.weights,
                                 float(beta), TWO_PI * float(n),
                                 self.aero_vector)

    def thrust(self, n: float, beta: float) -> float:
        return self.loads(n, beta)[0]

    def torque(self, n: float, beta: float) -> float:
        return self.loads(n, beta)[1]

    def power(self, n: float, beta: float) -> float:
        return TWO_PI * n * self.loads(n, beta)[1]

    def solve_speed_for_thrust(self, beta: float, thrust: float) -> float:
        """Shaft speed at which the propeller produces ``thrust``."""
        if thrust < 0:
            raise ValueError("thrust command must be non-negative")
        return _solve_increasing(lambda n: self.thrust(n, beta), thrust,
                                 self.n_max, "thrust")

    def solve_speed_for_power(self, beta: float, power: float) -> float:
        if power < 0:
            raise ValueError("power must be non-negative")
        return _solve_increasing(lambda n: self.power(n, beta), power,
                                 self.n_max, "power")

    def required_power(self, beta: float, thrust: float) -> float:
        return self.power(self.solve_speed_for_thrust(beta, thrust), beta)

    def thrust_from_power(self, beta: float, power: float) -> float:
        return self.thrust(self.solve_speed_for_power(beta, power), beta)


def _solve_increasing(f, target: float, n_max: float, what: str) -> float:
    """Root of ``f(n) = target`` on the increasing branch of ``f``.

    The bracket starts at ``[0, 50]`` rev/s and doubles up to ``n_max``.
    A coarse scan then finds the last branch on which ``f`` increases
    strictly up to the bracket top and requires ``target`` to exceed
    every value before it (the windmilling dip at low speed when there is
    axial inflow), so the root is unique; it is polished with Brent's
    method.
    """
    hi = min(_N_START, n_max)
    f_hi = f(hi)
    while f_hi < target and hi < n_max:
        hi = min(2.0 * hi, n_max)
        f_hi = f(hi)
    if f_hi < target:
        raise Unachievable(
            f"{what} {target:g} above {f_hi:g} reached at the "
            f"{n_max:g} rev/s ceiling")

    grid = np.linspace(0.0, hi, _SCAN_POINTS + 1)
    vals = np.array([f(n) for n in grid])
    steps = np.diff(vals)
    start = len(vals) - 1
    while start > 0 and steps[start - 1] > 0:
        start -= 1
    if start == 0 and vals[0] >= target:
        if vals[0] == target:
            return 0.0
        raise Unachievable(
            f"{what} {target:g} below its value {vals[0]:g} at rest")
    if target <= vals[:start + 1].max():
        raise NonMonotonic(
            f"{what} {target:g} is not on a branch increasing in n "
            f"on [0, {hi:g}]")
    k = start + int(np.argmax(vals[start:] >= target))
    a, b = float(grid[k - 1]), float(grid[k])
    if vals[k] == target:
        return b
    root = brentq(lambda n: f(n) - target, a, b, xtol=1e-13,
                  rtol=4 * np.finfo(float).eps, maxiter=200)
    tol = max(1e-9, 1e-9 * abs(target))
    if abs(f(root) - target) > tol:
        root = _bisect(f, target, a, b)
    return float(root)


def _bisect(f, target, a, b):
    while True:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            return b
        if f(mid) < target:
            a = mid
        else:
            b = mid


# Free-function forms over explicit parameter objects.

def _model(geom, aero, env, stations):
    return PropellerModel(geom, aero, env, stations)


def thrust(geom: BladeGeometry, aero: AeroModel, env: Environment,
           op: OperatingPoint, stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).thrust(op.rps, op.pitch)


def torque(geom: BladeGeometry, aero: AeroModel, env: Environment,
           op: OperatingPoint, stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).torque(op.rps, op.pitch)


def power(geom: BladeGeometry, aero: AeroModel, env: Environment,
          op: OperatingPoint, stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).power(op.rps, op.pitch)


def solve_speed_for_thrust(geom, aero, env, beta: float, thrust_c: float,
                           stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).solve_speed_for_thrust(
        beta, thrust_c)


def solve_speed_for_power(geom, aero, env, beta: float, power_c: float,
                          stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).solve_speed_for_power(
        beta, power_c)


def required_power(geom, aero, env, beta: float, thrust_c: float,
                   stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).required_power(beta, thrust_c)


def thrust_from_power(geom, aero, env, beta: float, power_c: float,
                      stations: int = DEFAULT_STATIONS) -> float:
    return _model(geom, aero, env, stations).thrust_from_power(beta, power_c)


def required_power_curve(model: PropellerModel, betas: Sequence[float],
                         thrust_c: float) -> np.ndarray:
    """Required power over ``betas``; NaN where the thrust is unachievable."""
    out = np.full(len(betas), np.nan)
    for j, b in enumerate(betas):
        try:
            out[j] = model.required_power(b, thrust_c)
        except (Unachievable, NonMonotonic):
            pass
    return out
