"""Gate-level netlist over the {NOR2, NOT, BUF, DLATCH, CONST0, CONST1} basis.

Nets are dense integers.  Each net has at most one driver: a gate output, a
primary input or the clock.  DLATCH gates take ``(D, C)`` and behave as
edge-triggered storage at this level, so the next value of a latch is simply
the value on its D net.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

NETLIST_FORMAT_VERSION = 1


class GateKind(str, Enum):
    NOR2 = "NOR2"
    NOT = "NOT"
    BUF = "BUF"
    DLATCH = "DLATCH"
    CONST0 = "CONST0"
    CONST1 = "CONST1"


ARITY = {
    GateKind.NOR2: 2,
    GateKind.NOT: 1,
    GateKind.BUF: 1,
    GateKind.DLATCH: 2,
    GateKind.CONST0: 0,
    GateKind.CONST1: 0,
}

COMBINATIONAL = (GateKind.NOR2, GateKind.NOT, GateKind.BUF)


class NetlistError(Exception):
    pass


@dataclass
class Gate:
    kind: GateKind
    inputs: tuple[int, ...]
    output: int
    label: str | None = None  # register bit name for latches

    def __post_init__(self):
        self.kind = GateKind(self.kind)
        self.inputs = tuple(self.inputs)
        if len(self.inputs) != ARITY[self.kind]:
            raise NetlistError(f"{self.kind.value} takes {ARITY[self.kind]} inputs")


@dataclass(frozen=True)
class PortBit:
    name: str
    bit: int
    net: int

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, self.bit)


@dataclass
class GateNetlist:
    num_nets: int = 0
    gates: list[Gate] = field(default_factory=list)
    inputs: list[PortBit] = field(default_factory=list)
    outputs: list[PortBit] = field(default_factory=list)
    clock: int | None = None

    # -- construction -----------------------------------------------------

    def new_net(self) -> int:
        self.num_nets += 1
        return self.num_nets - 1

    def add(self, kind: GateKind, inputs, label: str | None = None, output: int | None = None) -> int:
        out = self.new_net() if output is None else output
        self.gates.append(Gate(GateKind(kind), tuple(inputs), out, label))
        return out

    def copy(self) -> GateNetlist:
        return GateNetlist(
            self.num_nets,
            [Gate(g.kind, g.inputs, g.output, g.label) for g in self.gates],
            list(self.inputs),
            list(self.outputs),
            self.clock,
        )

    # -- queries ----------------------------------------------------------

    @property
    def latches(self) -> list[Gate]:
        return [g for g in self.gates if g.kind is GateKind.DLATCH]

    def counts(self) -> dict[str, int]:
        c = Counter(g.kind.value for g in self.gates)
        return {k.value: c.get(k.value, 0) for k in GateKind}

    def drivers(self) -> dict[int, int]:
        """Net -> index of the driving gate."""
        return {g.output: k for k, g in enumerate(self.gates)}

    def sinks(self) -> dict[int, list[tuple[int, int]]]:
        """Net -> list of (gate index, pin) it feeds."""
        out: dict[int, list[tuple[int, int]]] = {n: [] for n in range(self.num_nets)}
        for k, g in enumerate(self.gates):
            for pin, net in enumerate(g.inputs):
                out[net].append((k, pin))
        return out

    def fanout(self) -> dict[int, int]:
        return {net: len(s) for net, s in self.sinks().items()}

    def max_fanout(self) -> int:
        return max(self.fanout().values(), default=0)

    def topo_order(self) -> list[int]:
        """Indices of all gates with every combinational gate after its drivers.

        Latches and constants come first because their outputs are sources.
        """
        drivers = self.drivers()
        order: list[int] = []
        state = [0] * len(self.gates)  # 0 new, 1 visiting, 2 done
        for k, g in enumerate(self.gates):
            if g.kind not in COMBINATIONAL:
                order.append(k)
                state[k] = 2
        for start in range(len(self.gates)):
            if state[start]:
                continue
            stack = [(start, 0)]
            state[start] = 1
            while stack:
                k, pin = stack.pop()
                g = self.gates[k]
                if pin < len(g.inputs):
                    stack.append((k, pin + 1))
                    d = drivers.get(g.inputs[pin])
                    if d is None or state[d] == 2:
                        continue
                    if state[d] == 1:
                        raise NetlistError("combinational loop")
                    state[d] = 1
                    stack.append((d, 0))
                else:
                    state[k] = 2
                    order.append(k)
        return order

    def check(self) -> None:
        """Raise on structural violations."""
        seen: dict[int, str] = {}
        for p in self.inputs:
            seen[p.net] = f"input {p.name}[{p.bit}]"
        if self.clock is not None:
            if self.clock in seen:
                raise NetlistError(f"net {self.clock} has two drivers")
            seen[self.clock] = "clock"
        for g in self.gates:
            if g.output in seen:
                raise NetlistError(f"net {g.output} has two drivers")
            seen[g.output] = g.kind.value
            for net in g.inputs:
                if not 0 <= net < self.num_nets:
                    raise NetlistError(f"net {net} out of range")
        for g in self.gates:
            for net in g.inputs:
                if net not in seen:
                    raise NetlistError(f"net {net} has no driver")
        clock_nets = self.clock_tree()
        for g in self.latches:
            if g.inputs[1] not in clock_nets:
                raise NetlistError(f"latch {g.label} is not clocked by the clock net")
        self.topo_order()

    def clock_tree(self) -> set[int]:
        """Nets belonging to the clock distribution (clock net plus buffer tree)."""
        if self.clock is None:
            return set()
        sinks = self.sinks()
        tree = {self.clock}
        frontier = [self.clock]
        while frontier:
            net = frontier.pop()
            for k, _pin in sinks[net]:
                g = self.gates[k]
                if g.kind is GateKind.BUF and g.output not in tree:
                    tree.add(g.output)
                    frontier.append(g.output)
        return tree

    def depth(self) -> int:
        """Longest path, in combinational gates, between sequential boundaries.

        Sources are primary inputs, latch outputs and constants; sinks are
        latch D pins and primary outputs.  The clock tree is excluded.
        """
        return max(self.arrival().values(), default=0)

    def arrival(self) -> dict[int, int]:
        clock_nets = self.clock_tree()
        level: dict[int, int] = {p.net: 0 for p in self.inputs}
        for k in self.topo_order():
            g = self.gates[k]
            if g.output in clock_nets:
                continue
            if g.kind in COMBINATIONAL:
                level[g.output] = 1 + max(level.get(n, 0) for n in g.inputs)
            else:
                level[g.output] = 0
        return level

    def min_arrival(self) -> dict[int, int]:
        """Shortest gate count from any source to each net."""
        clock_nets = self.clock_tree()
        level: dict[int, int] = {p.net: 0 for p in self.inputs}
        for k in self.topo_order():
            g = self.gates[k]
            if g.output in clock_nets:
                continue
            if g.kind in COMBINATIONAL:
                level[g.output] = 1 + min(level.get(n, 0) for n in g.inputs)
            else:
                level[g.output] = 0
        return level

    # -- evaluation -------------------------------------------------------

    def evaluate(self, input_values: dict[int, int], state: dict[int, int], mask: int = 1) -> dict[int, int]:
        """Bit-parallel evaluation of every net.

        ``input_values`` maps primary-input nets and ``state`` maps latch
        output nets to value streams (Python ints, ``mask`` wide).
        """
        values: dict[int, int] = {}
        if self.clock is not None:
            values[self.clock] = 0
        values.update(input_values)
        for k in self.topo_order():
            g = self.gates[k]
            kind = g.kind
            if kind is GateKind.DLATCH:
                values[g.output] = state.get(g.output, 0)
            elif kind is GateKind.CONST0:
                values[g.output] = 0
            elif kind is GateKind.CONST1:
                values[g.output] = mask
            elif kind is GateKind.NOR2:
                values[g.output] = ~(values.get(g.inputs[0], 0) | values.get(g.inputs[1], 0)) & mask
            elif kind is GateKind.NOT:
                values[g.output] = ~values.get(g.inputs[0], 0) & mask
            else:
                values[g.output] = values.get(g.inputs[0], 0)
        return values

    def step(self, inputs: dict[tuple[str, int], int], state: dict[str, int]) -> tuple[dict[str, int], dict[tuple[str, int], int]]:
        """One clock edge on concrete bits.

        ``state`` is keyed by latch label.  Returns the next state and the
        primary-output values seen before the edge.
        """
        in_nets = {p.net: inputs.get(p.key, 0) for p in self.inputs}
        latch_q = {g.output: state.get(g.label, 0) for g in self.latches}
        values = self.evaluate(in_nets, latch_q)
        nxt = {g.label: values[g.inputs[0]] for g in self.latches}
        outs = {p.key: values[p.net] for p in self.outputs}
        return nxt, outs

    def settle_outputs(self, state: dict[str, int], inputs: dict[tuple[str, int], int] | None = None) -> dict[tuple[str, int], int]:
        _, outs = self.step(inputs or {}, state)
        return outs

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format_version": NETLIST_FORMAT_VERSION,
            "num_nets": self.num_nets,
            "clock": self.clock,
            "inputs": [{"name": p.name, "bit": p.bit, "net": p.net} for p in self.inputs],
            "outputs": [{"name": p.name, "bit": p.bit, "net": p.net} for p in self.outputs],
            "gates": [
                {"id": k, "kind": g.kind.value, "in": list(g.inputs), "out": g.output}
                | ({"label": g.label} if g.label is not None else {})
                for k, g in enumerate(self.gates)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> GateNetlist:
        version = data.get("format_version", NETLIST_FORMAT_VERSION)
        if version != NETLIST_FORMAT_VERSION:
            raise NetlistError(f"unsupported netlist format_version {version}")
        try:
            gates = []
            for g in data["gates"]:
                kind = g["kind"]
                if kind not in GateKind.__members__:
                    raise NetlistError(f"unsupported cell '{kind}'")
                gates.append(Gate(GateKind(kind), tuple(g["in"]), g["out"], g.get("label")))
            nl = cls(
                num_nets=data["num_nets"],
                gates=gates,
                inputs=[PortBit(p["name"], p["bit"], p["net"]) for p in data["inputs"]],
                outputs=[PortBit(p["name"], p["bit"], p["net"]) for p in data["outputs"]],
                clock=data.get("clock"),
            )
        except (KeyError, TypeError) as exc:
            raise NetlistError(f"schema violation: {exc}") from exc
        nl.check()
        return nl

    @classmethod
    def from_json(cls, text: str) -> GateNetlist:
        return cls.from_dict(json.loads(text))
