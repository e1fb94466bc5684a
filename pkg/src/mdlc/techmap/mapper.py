"""Technology mapping: gate netlist -> mass-spring network.

Nets and in-phase masses are in one-to-one correspondence: a gate's output
mass is the very mass its consumers use as input.

Timing model, in power-clock cycles, for an FSM window ``[kP, (k+1)P)``:
sensor forces change at ``kP``; every latch C pin ticks at
``kP + P - TICK_LEAD - out_depth``, Q settles ``LATCH_DELAY`` cycles later and
the output logic ``out_depth`` cycles after that, one cycle before actuators
are read at the last cycle of the window.  Combinational logic moves one gate
per cycle, which is what the period guard below accounts for.
"""

from __future__ import annotations

from mdlc.synth.netlist import GateKind, GateNetlist
from mdlc.techmap.cells import (
    build_clock,
    LATCH_DELAY,
    cell_buf,
    cell_clock_stretch,
    cell_const,
    cell_dlatch,
    cell_nor,
    cell_not,
)
from mdlc.techmap.network import MassSpringNetwork, Phase

DEFAULT_FSM_PERIOD = 60
TICK_LEAD = LATCH_DELAY + 2


class TechmapError(Exception):
    pass


def min_fsm_period(depth: int, out_depth: int = 0) -> int:
    """Smallest FSM period that lets a ``depth``-gate path settle between ticks."""
    return max(2 * depth + 2, depth + out_depth + TICK_LEAD + 1)


def output_depth(netlist: GateNetlist) -> int:
    """Gates between the latches (or inputs) and the slowest primary output."""
    level = netlist.arrival()
    return max((level.get(p.net, 0) for p in netlist.outputs), default=0)


def clock_levels(netlist: GateNetlist) -> dict[int, int]:
    """Latch gate index -> number of clock-tree buffers between the clock net and its C pin."""
    if netlist.clock is None:
        return {}
    drivers = netlist.drivers()
    out = {}
    for k, g in enumerate(netlist.gates):
        if g.kind is not GateKind.DLATCH:
            continue
        net, levels = g.inputs[1], 0
        while net != netlist.clock:
            d = drivers.get(net)
            if d is None or netlist.gates[d].kind is not GateKind.BUF:
                raise TechmapError(f"latch {g.label} clock pin is not reached through buffers")
            net = netlist.gates[d].inputs[0]
            levels += 1
        out[k] = levels
    return out


def map_netlist(
    netlist: GateNetlist,
    fsm_period: int = DEFAULT_FSM_PERIOD,
    auto_clock: bool = True,
    max_ring: int = 20,
) -> MassSpringNetwork:
    latches = netlist.latches
    if latches and netlist.clock is None:
        raise TechmapError("latches present but the netlist has no clock net")
    if latches and not auto_clock:
        raise TechmapError("design requires clock")
    depth = netlist.depth()
    out_depth = output_depth(netlist)
    need = min_fsm_period(depth, out_depth)
    if latches and fsm_period < need:
        raise TechmapError(
            f"fsm_period {fsm_period} too small for combinational depth {depth} "
            f"(need at least {need})"
        )

    net = MassSpringNetwork(fsm_period=fsm_period if latches else 0)
    drivers = netlist.drivers()
    clock_nets = netlist.clock_tree()
    inputs = {p.net: p for p in netlist.inputs}
    outputs = {p.net: p for p in netlist.outputs}
    latch_out = {g.output for g in latches}

    mass: dict[int, int] = {}
    for n in range(netlist.num_nets):
        d = drivers.get(n)
        gate = netlist.gates[d] if d is not None else None
        if gate is not None and gate.kind in (GateKind.CONST0, GateKind.CONST1):
            mass[n] = cell_const(net, 1 if gate.kind is GateKind.CONST1 else 0, label=f"n{n}")
            continue
        if n in inputs:
            tag = "sensor"
        elif n in outputs:
            tag = "actuator"
        elif n in clock_nets:
            tag = "clock"
        else:
            tag = "output"
        x0 = -1.0 if (n in clock_nets or n in latch_out) else 0.0
        p = inputs.get(n) or outputs.get(n)
        label = f"{p.name}[{p.bit}]" if p else (f"{gate.label}" if gate is not None and gate.label else f"n{n}")
        mass[n] = net.add_mass(Phase.IN, tag, x0=x0, label=label)

    stretch: dict[int, int] = {}
    for g in netlist.gates:
        out = mass[g.output]
        ins = [mass[i] for i in g.inputs]
        x0 = net.masses[out].x0
        label = net.masses[out].label
        if g.kind is GateKind.NOR2:
            cell_nor(net, ins[0], ins[1], out=out, x0=x0, label=label)
        elif g.kind is GateKind.NOT:
            cell_not(net, ins[0], out=out, x0=x0, label=label)
        elif g.kind is GateKind.BUF:
            cell_buf(net, ins[0], out=out, x0=x0, label=label)
        elif g.kind is GateKind.DLATCH:
            c = ins[1]
            if sum(1 for h in latches if h.inputs[1] == g.inputs[1]) > 2:
                raise TechmapError(f"clock pin of latch {g.label} drives more than two latches")
            if c not in stretch:
                stretch[c] = cell_clock_stretch(net, c, label=f"{net.masses[c].label or 'clk'}.st")
            cell_dlatch(net, ins[0], c, out=out, label=label, stretch=stretch[c])
            net.latches[g.label or label] = out

    net.sensors = {p.key: mass[p.net] for p in netlist.inputs}
    net.actuators = {p.key: mass[p.net] for p in netlist.outputs}

    if latches:
        levels = set(clock_levels(netlist).values())
        if len(levels) > 1:
            net.notes.append(f"clock skew: latch clock depths {sorted(levels)}")
        level = max(levels)
        net.tick_cycle = fsm_period - TICK_LEAD - out_depth
        # ring output -> root buffer -> ``level`` tree buffers -> latch C pins
        clock = build_clock(net, fsm_period, (net.tick_cycle - 1 - level) % fsm_period, max_ring)
        if clock.period != fsm_period:
            raise TechmapError(f"clock period {clock.period} differs from fsm_period {fsm_period}")
        root = mass[netlist.clock]
        cell_buf(net, clock.output, out=root, x0=-1.0, label="clk")
        net.clock_output = clock.output
        net.clock_root = root
        net.rings = clock.rings
        net.notes.extend(clock.notes)
    net.check()
    return net
