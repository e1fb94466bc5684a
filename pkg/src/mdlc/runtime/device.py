"""Devices that advance one FSM tick at a time.

``PhysicalDevice`` integrates the compiled mass-spring network; ``LogicDevice``
clocks the gate netlist directly and serves as the fast reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from mdlc.dynamics import SimParams, Simulator, initial_state
from mdlc.synth.netlist import GateNetlist
from mdlc.techmap.network import MassSpringNetwork

BitKey = tuple[str, int]


def to_bits(name: str, value: int, width: int) -> dict[BitKey, int]:
    return {(name, i): (value >> i) & 1 for i in range(width)}


def from_bits(bits: dict[BitKey, int], name: str) -> int:
    return sum(v << i for (n, i), v in bits.items() if n == name)


@dataclass
class TickResult:
    outputs: dict[BitKey, int]
    state: dict[str, int]  # latch label -> bit


def _check_inputs(inputs: dict[BitKey, int], known) -> None:
    for key in inputs:
        if key not in known:
            raise KeyError(f"unknown input bit {key[0]}[{key[1]}]")


class PhysicalDevice:
    """Closed-loop wrapper around the ODE model.

    Each tick applies a constant force of +q (bit 1) or -q (bit 0) on every
    sensor mass for one FSM window, then reads actuators and latches at the
    readout phase of the window's last cycle.
    """

    def __init__(self, network: MassSpringNetwork, params: SimParams = SimParams()):
        if network.fsm_period <= 0:
            raise ValueError("network has no FSM clock; nothing to tick")
        self.network = network
        self.params = params
        self.sim = Simulator(network, params)
        self.state = initial_state(network)
        self.ticks = 0
        self.last_samples: np.ndarray | None = None

    def tick(self, inputs: dict[BitKey, int]) -> TickResult:
        net = self.network
        _check_inputs(inputs, net.sensors)
        ext = np.zeros(net.num_masses)
        for key, m in net.sensors.items():
            ext[m] = self.params.q if inputs.get(key, 0) else -self.params.q
        samples = self.sim.run_cycles(self.state, net.fsm_period, ext)
        self.last_samples = samples
        row = samples[net.sample_cycle]
        self.ticks += 1
        return TickResult(
            outputs={k: int(row[m] > 0) for k, m in net.actuators.items()},
            state={k: int(row[m] > 0) for k, m in net.latches.items()},
        )


class LogicDevice:
    """Cycle-accurate netlist reference with the same tick interface."""

    def __init__(self, netlist: GateNetlist):
        self.netlist = netlist
        self.latch_state = {g.label: 0 for g in netlist.latches}
        self.ticks = 0

    def tick(self, inputs: dict[BitKey, int]) -> TickResult:
        _check_inputs(inputs, {p.key for p in self.netlist.inputs})
        self.latch_state, _ = self.netlist.step(inputs, self.latch_state)
        outs = self.netlist.settle_outputs(self.latch_state, inputs)
        self.ticks += 1
        return TickResult(outputs=outs, state=dict(self.latch_state))
