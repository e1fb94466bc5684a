"""Closed-loop co-simulation of compiled devices with their environment."""

from mdlc.runtime.device import LogicDevice, PhysicalDevice, TickResult, from_bits, to_bits
from mdlc.runtime.maze import (
    ACTUATOR,
    DIRECTIONS,
    PRIORITY,
    MazeError,
    MazeRun,
    MazeStep,
    MazeWorld,
    direction_codes,
    generate_maze,
    reference_next,
    run_maze,
    run_reference,
    sensor_inputs,
    step_closed_loop,
)
from mdlc.runtime.scenario import (
    Phase,
    ScenarioError,
    ScenarioResult,
    parse_scenario,
    run_scenario,
)

__all__ = [
    "LogicDevice", "PhysicalDevice", "TickResult", "from_bits", "to_bits",
    "ACTUATOR", "DIRECTIONS", "PRIORITY", "MazeError", "MazeRun", "MazeStep", "MazeWorld",
    "direction_codes", "generate_maze", "reference_next", "run_maze", "run_reference",
    "sensor_inputs", "step_closed_loop",
    "Phase", "ScenarioError", "ScenarioResult", "parse_scenario", "run_scenario",
]
