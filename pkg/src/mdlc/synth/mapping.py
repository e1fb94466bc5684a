"""Map AIG next-state functions onto the NOR/NOT basis.

An AND node ``a & b`` is realized as ``NOR(~a, ~b)``; complemented fanins that
are already available as nets cost nothing, other complements cost one NOT.
Inverters are shared, so double negation never produces a gate.
"""

from __future__ import annotations

from mdlc.synth.aig import FALSE, TRUE
from mdlc.synth.elaborate import FunctionTable, bit_name
from mdlc.synth.netlist import GateKind, GateNetlist, PortBit


class _Mapper:
    def __init__(self, table: FunctionTable, netlist: GateNetlist, base: dict[int, int]):
        self.t = table
        self.nl = netlist
        self.base = base  # AIG node -> net carrying its positive polarity
        self.negated: dict[int, int] = {}  # AIG node -> net carrying its complement
        self.consts: dict[int, int] = {}

    def net(self, lit: int) -> int:
        if lit in (FALSE, TRUE):
            if lit not in self.consts:
                kind = GateKind.CONST1 if lit == TRUE else GateKind.CONST0
                self.consts[lit] = self.nl.add(kind, ())
            return self.consts[lit]
        node = lit >> 1
        if node not in self.base:
            a, b = self.t.aig.fanins[node]
            self.base[node] = self.nl.add(GateKind.NOR2, (self.net(a ^ 1), self.net(b ^ 1)))
        if not lit & 1:
            return self.base[node]
        if node not in self.negated:
            self.negated[node] = self.nl.add(GateKind.NOT, (self.base[node],))
        return self.negated[node]


def map_to_basis(table: FunctionTable) -> GateNetlist:
    """One DLATCH per register bit plus the NOR/NOT logic feeding it.

    Primary outputs are the latch outputs of the output-port registers.
    """
    nl = GateNetlist()
    base: dict[int, int] = {}
    for k, bit in enumerate(table.inputs):
        net = nl.new_net()
        nl.inputs.append(PortBit(bit[0], bit[1], net))
        base[(table.aig.var(k)) >> 1] = net
    latch_q: dict = {}
    if table.state:
        nl.clock = nl.new_net()
        for bit in table.state:
            q = nl.new_net()
            latch_q[bit] = q
            base[table.state_lit(bit) >> 1] = q
    mapper = _Mapper(table, nl, base)
    # map deeper functions first for a stable, readable gate order
    for bit in table.state:
        d = mapper.net(table.next_state[bit])
        nl.add(GateKind.DLATCH, (d, nl.clock), label=bit_name(bit), output=latch_q[bit])
    for bit in table.outputs:
        nl.outputs.append(PortBit(bit[0], bit[1], latch_q[bit]))
    nl.check()
    return nl
