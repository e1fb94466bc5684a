"""Gate netlist to mass-spring network mapping, cells and clocks."""

from mdlc.techmap.cells import (
    LATCH_DELAY,
    ClockCircuit,
    build_clock,
    cell_buf,
    cell_clock_stretch,
    cell_const,
    cell_dlatch,
    cell_nor,
    cell_not,
    choose_ring_periods,
    compose_coprime_clocks,
    generate_clock,
    ring_tick_cycle,
)
from mdlc.techmap.mapper import (
    DEFAULT_FSM_PERIOD,
    TICK_LEAD,
    TechmapError,
    clock_levels,
    map_netlist,
    min_fsm_period,
    output_depth,
)
from mdlc.techmap.network import (
    NETWORK_FORMAT_VERSION,
    CouplingKind,
    CouplingSpec,
    MassSpec,
    MassSpringNetwork,
    Phase,
)

__all__ = [
    "LATCH_DELAY", "ClockCircuit", "build_clock", "cell_buf", "cell_clock_stretch", "cell_const", "cell_dlatch", "cell_nor", "cell_not",
    "choose_ring_periods", "compose_coprime_clocks", "generate_clock", "ring_tick_cycle",
    "DEFAULT_FSM_PERIOD", "TICK_LEAD", "TechmapError", "clock_levels", "map_netlist", "min_fsm_period", "output_depth",
    "NETWORK_FORMAT_VERSION", "CouplingKind", "CouplingSpec", "MassSpec", "MassSpringNetwork", "Phase",
]
