"""Flat ``key = value`` parameter files.

One file carries every section (propeller, motor, loop, calibration,
plant, optimizer); :func:`load_config` overlays a user file on the packaged
reference rig and the ``build_*`` helpers turn the result into model
objects. Unknown keys are rejected so typos fail loudly.
"""

from __future__ import annotations

import math
from importlib import resources
from pathlib import Path

from .control import AffineMap, Calibration, PidGains
from .errors import ConfigError
from .motor import MotorParams
from .optimizer import OptimizerConfig
from .plant import PlantLimits, SimulatedPlant
from .propeller import AeroModel, BladeGeometry, Environment, PropellerModel

_TEXT_KEYS = {"chord_table"}


def parse_text(text: str) -> dict[str, object]:
    out: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key in _TEXT_KEYS:
            out[key] = value
            continue
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: {key} is not a number") from None
    return out


def parse_chord_table(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        r, sep, c = item.partition(":")
        if not sep:
            raise ConfigError(f"chord_table entry {item!r} is not 'r:c'")
        try:
            pairs.append((float(r), float(c)))
        except ValueError:
            raise ConfigError(f"chord_table entry {item!r} is not numeric") from None
    return tuple(pairs)


def reference_text() -> str:
    return resources.files("pitchopt").joinpath(
        "data/reference.cfg").read_text()


def load_config(path: str | Path | None = None,
                **overrides: float) -> dict[str, object]:
    """Reference values overlaid with ``path`` and then ``overrides``."""
    cfg = parse_text(reference_text())
    if path is not None:
        user = parse_text(Path(path).read_text())
        unknown = sorted(set(user) - set(cfg))
        if unknown:
            raise ConfigError(f"unknown keys: {', '.join(unknown)}")
        cfg.update(user)
    for key, value in overrides.items():
        if key not in cfg:
            raise ConfigError(f"unknown key: {key}")
        cfg[key] = value
    return cfg


def build_model(cfg, airspeed: float | None = None) -> PropellerModel:
    try:
        geom = BladeGeometry(cfg["diameter_m"], int(cfg["blades"]),
                             parse_chord_table(cfg["chord_table"]))
        aero = AeroModel(cfg["cl_alpha"], cfg["alpha0_rad"], cfg["cd0"],
                         cfg["k_induced"])
        env = Environment(cfg["rho"],
                          cfg["airspeed"] if airspeed is None else airspeed)
        return PropellerModel(geom, aero, env, int(cfg["stations"]),
                              cfg["n_max_rps"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_motor(cfg) -> MotorParams:
    return MotorParams(cfg["inertia_kgm2"], cfg["emf_kb"], cfg["viscous_b1"],
                       cfg["resistance_ohm"], cfg["inductance_h"],
                       cfg["voltage_limit_v"])


def build_gains(cfg) -> PidGains:
    return PidGains(cfg["kp"], cfg["ki"], cfg["kd"], cfg["integral_limit"])


def build_calibration(cfg) -> Calibration:
    g = cfg["cal_loadcell_gain"]
    z = cfg["cal_loadcell_zero"]
    return Calibration(
        supply_voltage=AffineMap(cfg["cal_voltage_scale"],
                                 cfg["cal_voltage_offset"]),
        current_ma=AffineMap(cfg["cal_current_scale"],
                             cfg["cal_current_offset"]),
        thrust=AffineMap(9.81 * g / 1000, -(9.81 * z / 1000)),
        pitch_deg=AffineMap.about(cfg["cal_servo_scale"],
                                  cfg["cal_servo_zero"]),
    )


def build_limits(cfg) -> PlantLimits:
    return PlantLimits(
        power_ceiling=cfg["power_ceiling_w"],
        beta_range=(math.radians(cfg["beta_min_deg"]),
                    math.radians(cfg["beta_max_deg"])),
        settle_tolerance=cfg["settle_tolerance"],
        settle_window=cfg["settle_window_s"],
        measure_window=cfg["measure_window_s"],
        timeout=cfg["timeout_s"],
    )


def build_plant(cfg, **kwargs) -> SimulatedPlant:
    """Simulated rig from ``cfg``; keyword arguments replace any part."""
    try:
        opts = dict(limits=build_limits(cfg),
                    calibration=build_calibration(cfg), dt=cfg["dt_s"],
                    control_period=cfg["control_period_s"],
                    ramp_duration=cfg["ramp_duration_s"],
                    noise=cfg["noise_n"], seed=int(cfg["seed"]))
        opts.update(kwargs)
        model = opts.pop("model", None) or build_model(cfg)
        motor = opts.pop("motor", None) or build_motor(cfg)
        gains = opts.pop("gains", None) or build_gains(cfg)
        return SimulatedPlant(model, motor, gains, **opts)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def reference_plant(**kwargs) -> SimulatedPlant:
    return build_plant(load_config(), **kwargs)


def build_optimizer(cfg, algorithm: str = "fixed") -> OptimizerConfig:
    """Optimizer settings; ``variable`` starts from the larger step."""
    if algorithm not in ("fixed", "variable"):
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    step_key = "pitch_step_deg" if algorithm == "fixed" \
        else "variable_pitch_step_deg"
    iterations = int(cfg["max_iterations"])
    max_time = cfg["max_time_s"]
    try:
        return OptimizerConfig(
            thrust=cfg["thrust_command_n"],
            beta_init=math.radians(cfg["beta_init_deg"]),
            pitch_step=math.radians(cfg[step_key]),
            step_decrement=math.radians(cfg["step_decrement_deg"]),
            min_step=math.radians(cfg["min_step_deg"]),
            max_iterations=iterations if iterations >= 0 else None,
            max_time=max_time if max_time > 0 else None,
            convergence_reversals=int(cfg["convergence_reversals"]),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
