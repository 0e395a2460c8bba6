"""Simulation and online pitch optimization of a DC motor driving a
variable-pitch propeller."""

from .kernels import BACKEND
from .propeller import (AeroModel, BladeGeometry, Environment, OperatingPoint,
                        PropellerModel)
from .motor import MotorParams, MotorState
from .plant import PlantLimits, SettledMeasurement, SimulatedPlant
from .optimizer import (OptimizationTrace, OptimizerConfig,
                        fixed_step_optimize, grid_search_optimum,
                        variable_step_optimize)
from .config import load_config, reference_plant

__all__ = [
    "BACKEND", "AeroModel", "BladeGeometry", "Environment", "OperatingPoint",
    "PropellerModel", "MotorParams", "MotorState", "PlantLimits",
    "SettledMeasurement", "SimulatedPlant", "OptimizerConfig",
    "OptimizationTrace", "fixed_step_optimize", "variable_step_optimize",
    "grid_search_optimum", "load_config", "reference_plant",
]
