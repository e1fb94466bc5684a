"""Netlist transformation passes.

All passes return a new netlist and preserve the logic function.  The order
used by the compiler is ``insert_io_buffers``, ``fix_hold``,
``limit_fanout`` and finally ``isolate_loads``.
"""

from __future__ import annotations

import math

from mdlc.synth.netlist import GateKind, GateNetlist, PortBit

# sinks whose intermediate mass can push back against a driver holding the
# opposite value: NOR inputs and latch data pins
_ADVERSE = {(GateKind.NOR2, 0), (GateKind.NOR2, 1), (GateKind.DLATCH, 0)}


def _rewire(nl: GateNetlist, gate: int, pin: int, net: int) -> None:
    g = nl.gates[gate]
    ins = list(g.inputs)
    ins[pin] = net
    g.inputs = tuple(ins)


def insert_io_buffers(netlist: GateNetlist) -> GateNetlist:
    """Put a BUF behind every primary input and in front of every primary output.

    The input side gives each sensor mass a private cell to drive; the output
    side makes each actuator a dedicated mass rather than a latch output.
    """
    nl = netlist.copy()
    sinks = nl.sinks()
    for p in nl.inputs:
        inner = nl.new_net()
        for gate, pin in sinks[p.net]:
            _rewire(nl, gate, pin, inner)
        nl.add(GateKind.BUF, (p.net,), output=inner)
    outputs = []
    for p in nl.outputs:
        out = nl.add(GateKind.BUF, (p.net,))
        outputs.append(PortBit(p.name, p.bit, out))
    nl.outputs = outputs
    return nl


def fix_hold(netlist: GateNetlist, min_gates: int = 1) -> GateNetlist:
    """Ensure at least ``min_gates`` gates between a latch output and any D pin.

    A latch fed straight from another latch would see the new value within the
    same tick and shift through both stages at once.
    """
    nl = netlist.copy()
    levels = nl.min_arrival()
    for k, g in enumerate(list(nl.gates)):
        if g.kind is not GateKind.DLATCH:
            continue
        d = g.inputs[0]
        short = min_gates - levels.get(d, 0)
        for _ in range(max(short, 0)):
            d = nl.add(GateKind.BUF, (d,))
        _rewire(nl, k, 0, d)
    return nl


def _buffer_tree(nl: GateNetlist, net: int, sinks: list[tuple[int, int]], limit: int) -> None:
    """Balanced tree: every internal net drives at most ``limit`` sinks."""
    if len(sinks) <= limit:
        for gate, pin in sinks:
            _rewire(nl, gate, pin, net)
        return
    size = math.ceil(len(sinks) / limit)
    groups = [sinks[i : i + size] for i in range(0, len(sinks), size)]
    for group in groups:
        if len(group) == 1:
            _rewire(nl, group[0][0], group[0][1], net)
        else:
            buf = nl.add(GateKind.BUF, (net,))
            _buffer_tree(nl, buf, group, limit)


def _equal_depth_tree(nl: GateNetlist, net: int, sinks: list[tuple[int, int]], limit: int, levels: int) -> None:
    """Buffer tree with every sink exactly ``levels`` buffers below ``net``."""
    if levels == 0:
        for gate, pin in sinks:
            _rewire(nl, gate, pin, net)
        return
    size = math.ceil(len(sinks) / limit)
    for i in range(0, len(sinks), size):
        buf = nl.add(GateKind.BUF, (net,))
        _equal_depth_tree(nl, buf, sinks[i : i + size], limit, levels - 1)


def clock_tree_levels(latches: int, limit: int = 2) -> int:
    """Buffer levels below the clock net needed to reach ``latches`` C pins."""
    levels = 0
    while limit ** (levels + 1) < latches:
        levels += 1
    return levels


def limit_fanout(netlist: GateNetlist, max_fanout: int = 2) -> GateNetlist:
    """Insert BUF trees so no net drives more than ``max_fanout`` gate inputs.

    A data net with k > max_fanout sinks gets a balanced tree (k - 2 buffers
    for a limit of 2).  The clock net gets a tree whose leaves all sit at the
    same depth, so every latch sees the tick in the same power-clock cycle.
    """
    if max_fanout < 2:
        raise ValueError("max_fanout must be at least 2")
    nl = netlist.copy()
    for net, sinks in nl.sinks().items():
        if len(sinks) <= max_fanout:
            continue
        if net == nl.clock:
            levels = clock_tree_levels(len(sinks), max_fanout)
            _equal_depth_tree(nl, net, sinks, max_fanout, levels)
        else:
            _buffer_tree(nl, net, sinks, max_fanout)
    return nl


def isolate_loads(netlist: GateNetlist) -> GateNetlist:
    """Keep each net's push-back sinks within a single gate.

    When a net feeds NOR inputs or latch data pins of two different gates,
    one of those gates can hold an intermediate mass in the opposite state
    and push hard enough to flip a shared driver.  A BUF in front of the
    second gate decouples them.  Sink counts never grow.
    """
    nl = netlist.copy()
    for net, sinks in nl.sinks().items():
        adverse = [(g, p) for g, p in sinks if (nl.gates[g].kind, p) in _ADVERSE]
        if len({g for g, _ in adverse}) < 2:
            continue
        first = adverse[0][0]
        moved = [(g, p) for g, p in adverse if g != first]
        buf = nl.add(GateKind.BUF, (net,))
        for g, p in moved:
            _rewire(nl, g, p, buf)
    return nl


def prepare(netlist: GateNetlist, io_buffers: bool = True, fanout_trees: bool = True, max_fanout: int = 2) -> GateNetlist:
    """The standard post-mapping pass sequence."""
    nl = insert_io_buffers(netlist) if io_buffers else netlist.copy()
    nl = fix_hold(nl)
    if fanout_trees:
        nl = limit_fanout(nl, max_fanout)
        nl = isolate_loads(nl)
    nl.check()
    return nl
