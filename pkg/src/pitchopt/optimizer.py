"""Online pitch hill climbing at a fixed thrust command.

Both climbers measure the settled electrical power after every pitch move
and keep going while it falls, turn around when it rises, and push the
pitch up whenever the plant reports power saturation. The variable-step
climber additionally shrinks its step on every turn-around until it
reaches ``min_step``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import NonMonotonic, NowhereAchievable, PitchOptError, Unachievable
from .plant import Plant, SettledMeasurement
from .propeller import PropellerModel

_STEP_EPS = 1e-12


@dataclass(frozen=True)
class OptimizerConfig:
    """Climber settings; angles in radians.

    ``max_iterations`` caps the number of plant calls (the initial
    measurement included) and ``max_time`` the simulated seconds spent in
    them; ``None`` disables a cap. ``convergence_reversals`` > 0 stops the
    run after that many turn-arounds made at ``min_step``.
    """

    thrust: float = 0.52
    beta_init: float = math.radians(0.59)
    pitch_step: float = math.radians(0.59)
    step_decrement: float = math.radians(0.59)
    min_step: float = math.radians(0.59)
    max_iterations: int | None = None
    max_time: float | None = 180.0
    convergence_reversals: int = 0

    def __post_init__(self):
        if not (self.pitch_step > 0 and self.min_step > 0):
            raise ValueError("pitch_step and min_step must be positive")
        if self.step_decrement < 0:
            raise ValueError("step_decrement must be non-negative")
        if self.thrust < 0:
            raise ValueError("thrust command must be non-negative")
        if self.max_iterations is None and self.max_time is None \
                and self.convergence_reversals <= 0:
            raise ValueError("run needs an iteration, time or convergence budget")
        if self.max_iterations is not None and self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.max_time is not None and self.max_time <= 0:
            raise ValueError("max_time must be positive")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    time: float         # simulated s since the run started, after this call
    beta: float
    power: float
    thrust: float
    direction: int
    step: float
    saturated: bool


@dataclass
class OptimizationTrace:
    algorithm: str
    records: list[TraceRecord] = field(default_factory=list)
    stop_reason: str = "budget"

    def __len__(self):
        return len(self.records)

    @property
    def plant_calls(self) -> int:
        return len(self.records)

    @property
    def betas(self) -> np.ndarray:
        return np.array([r.beta for r in self.records])

    @property
    def powers(self) -> np.ndarray:
        return np.array([r.power for r in self.records])

    @property
    def steps(self) -> np.ndarray:
        return np.array([r.step for r in self.records])

    @property
    def directions(self) -> np.ndarray:
        return np.array([r.direction for r in self.records])

    @property
    def terminal(self) -> TraceRecord:
        return self.records[-1]

    def calls_to_settle_near(self, beta_star: float, tol: float) -> int | None:
        """Plant calls until ``beta`` enters ``beta_star +/- tol`` for good."""
        betas = self.betas
        inside = np.abs(betas - beta_star) <= tol + _STEP_EPS
        if not len(inside) or not inside[-1]:
            return None
        outside = np.nonzero(~inside)[0]
        return int(outside[-1] + 2) if len(outside) else 1


def _climb(plant: Plant, cfg: OptimizerConfig, beta_range, shrink: bool,
           name: str) -> OptimizationTrace:
    trace = OptimizationTrace(name)
    lo, hi = beta_range if beta_range is not None else (-math.inf, math.inf)
    elapsed = 0.0

    def budget_left() -> bool:
        if cfg.max_iterations is not None and \
                len(trace.records) >= cfg.max_iterations:
            return False
        return cfg.max_time is None or elapsed < cfg.max_time

    def measure(beta: float) -> SettledMeasurement:
        nonlocal elapsed
        try:
            m = plant.set_propeller(beta, cfg.thrust)
        except PitchOptError as exc:
            trace.stop_reason = "error"
            exc.trace = trace
            raise
        elapsed += m.settle_time
        return m

    def record(m, beta, direction, step):
        trace.records.append(TraceRecord(
            len(trace.records), elapsed, beta, m.power, m.thrust, direction,
            step, m.saturated))

    if not budget_left():
        return trace
    beta = cfg.beta_init
    step = cfg.pitch_step
    direction = 1
    m = measure(beta)
    record(m, beta, direction, step)
    prev_power = m.power
    diff_power = 1.0
    clamped = False
    settled_turns = 0

    while budget_left():
        if m.saturated:
            next_direction = 1
        elif diff_power > 0:
            next_direction = 1
        else:
            next_direction = -1
        reversal = direction * next_direction == -1
        if shrink and (reversal or clamped) and \
                step > cfg.min_step + _STEP_EPS:
            step = max(step - cfg.step_decrement, cfg.min_step)
        target = beta + next_direction * step
        beta = min(max(target, lo), hi)
        clamped = beta != target
        m = measure(beta)
        diff_power = prev_power - m.power
        prev_power = m.power
        direction = next_direction
        record(m, beta, direction, step)
        if cfg.convergence_reversals > 0 and reversal:
            at_min = step <= cfg.min_step + _STEP_EPS
            settled_turns = settled_turns + 1 if at_min else 0
            if settled_turns >= cfg.convergence_reversals:
                trace.stop_reason = "converged"
                break
    return trace


def _plant_range(plant):
    limits = getattr(plant, "limits", None)
    return None if limits is None else limits.beta_range


def fixed_step_optimize(plant: Plant, cfg: OptimizerConfig,
                        beta_range=None) -> OptimizationTrace:
    """Hill climb with a constant pitch step.

    ``beta_range`` defaults to the plant's actuator range when it exposes
    one. Plant errors propagate with the partial trace attached as
    ``exc.trace``.
    """
    return _climb(plant, cfg, beta_range or _plant_range(plant), False,
                  "fixed")


def variable_step_optimize(plant: Plant, cfg: OptimizerConfig,
                           beta_range=None) -> OptimizationTrace:
    """Hill climb whose step shrinks by ``step_decrement`` at each
    turn-around (or range-end clamp) down to ``min_step``."""
    return _climb(plant, cfg, beta_range or _plant_range(plant), True,
                  "variable")


def _evaluator(source, thrust: float) -> Callable[[float], tuple[float, bool]]:
    if hasattr(source, "set_propeller"):
        def f(beta):
            m = source.set_propeller(beta, thrust)
            return m.power, m.saturated
    elif isinstance(source, PropellerModel):
        def f(beta):
            try:
                return source.required_power(beta, thrust), False
            except (Unachievable, NonMonotonic):
                return math.inf, True
    else:
        def f(beta):
            out = source(beta, thrust)
            if isinstance(out, SettledMeasurement):
                return out.power, out.saturated
            return float(out), False
    return f


def grid_search_optimum(source, beta_grid: Iterable[float],
                        thrust: float) -> tuple[float, float]:
    """Exhaustive search for the least-power pitch on ``beta_grid``.

    ``source`` is a plant (settled measurements, saturated points
    skipped), a :class:`PropellerModel` (aerodynamic required power,
    unachievable points skipped) or a callable ``f(beta, thrust)``
    returning a power or a measurement. Ties go to the lowest pitch.
    """
    f = _evaluator(source, thrust)
    best = None
    for beta in beta_grid:
        power, saturated = f(beta)
        if saturated:
            continue
        if best is None or power < best[1] or \
                (power == best[1] and beta < best[0]):
            best = (float(beta), float(power))
    if best is None:
        raise NowhereAchievable(
            f"thrust {thrust:g} N saturates at every grid point")
    return best
