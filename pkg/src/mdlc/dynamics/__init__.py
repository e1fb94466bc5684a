"""Nonlinear mass-spring dynamics under the power clock."""

from mdlc.dynamics.model import (
    NetworkArrays,
    SimParams,
    gradient,
    kinetic_energy,
    network_arrays,
    potential,
    power_clock,
)
from mdlc.dynamics.simulate import (
    CHECKPOINT_FORMAT_VERSION,
    ForceSchedule,
    SimState,
    SimulationDiverged,
    Simulator,
    Trace,
    initial_state,
    rk4_step,
    simulate,
)

__all__ = [
    "NetworkArrays", "SimParams", "gradient", "kinetic_energy", "network_arrays", "potential", "power_clock",
    "CHECKPOINT_FORMAT_VERSION", "ForceSchedule", "SimState", "SimulationDiverged", "Simulator", "Trace",
    "initial_state", "rk4_step", "simulate",
]
