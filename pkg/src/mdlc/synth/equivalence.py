"""Exhaustive equivalence checking by bit-parallel simulation.

All 2**n assignments of the input and state bits are packed into one Python
integer per variable, so a single netlist evaluation covers the whole space.
"""

from __future__ import annotations

from mdlc.synth.aig import var_pattern
from mdlc.synth.elaborate import FunctionTable, bit_name
from mdlc.synth.netlist import GateNetlist

MAX_EQUIVALENCE_BITS = 24


class EquivalenceError(Exception):
    pass


def check_equivalence(netlist: GateNetlist, table: FunctionTable) -> bool:
    """True iff every latch D pin and primary output matches ``table``.

    Latches are matched to register bits by label, primary inputs by name
    and bit.  Outputs are latched, so each must equal its register's
    current value.
    """
    n = table.num_bits
    if n > MAX_EQUIVALENCE_BITS:
        raise EquivalenceError(f"instance too large: {n} bits > {MAX_EQUIVALENCE_BITS}")
    if not table.next_state and not netlist.gates:
        return True
    mask = (1 << (1 << n)) - 1
    variables = list(table.inputs) + list(table.state)
    patterns = {bit: var_pattern(k, n) for k, bit in enumerate(variables)}

    in_nets = {}
    for p in netlist.inputs:
        if p.key not in patterns:
            return False
        in_nets[p.net] = patterns[p.key]
    by_label = {bit_name(bit): bit for bit in table.state}
    latches = netlist.latches
    if sorted(g.label or "" for g in latches) != sorted(by_label):
        return False
    latch_q = {g.output: patterns[by_label[g.label]] for g in latches}
    values = netlist.evaluate(in_nets, latch_q, mask)

    aig_patterns = [0] * table.aig.num_vars
    for k, bit in enumerate(table.inputs):
        aig_patterns[k] = patterns[bit]
    for bit, var in table.state_vars.items():
        aig_patterns[var] = patterns[bit]
    roots = list(table.next_state.values())
    aig_values = table.aig.simulate(aig_patterns, roots, mask)

    for g in latches:
        want = table.aig.lit_value(aig_values, table.next_state[by_label[g.label]], mask)
        if values[g.inputs[0]] != want:
            return False
    expected_outputs = {bit for bit in table.outputs}
    seen = set()
    for p in netlist.outputs:
        if p.key not in expected_outputs or values[p.net] != patterns[p.key]:
            return False
        seen.add(p.key)
    return seen == expected_outputs
