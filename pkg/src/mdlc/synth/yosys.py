"""Import of Yosys ``write_json`` gate netlists.

Only single-bit gate cells are understood.  The cell map says which Yosys
cell type corresponds to which basis gate and which pins carry the inputs
and the output, so libraries with other cell names can be read too.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from mdlc.synth.netlist import GateKind, GateNetlist, NetlistError, PortBit


@dataclass(frozen=True)
class CellSpec:
    kind: GateKind
    inputs: tuple[str, ...]
    output: str


DEFAULT_CELL_MAP: dict[str, CellSpec] = {
    "$_NOR_": CellSpec(GateKind.NOR2, ("A", "B"), "Y"),
    "$_NOT_": CellSpec(GateKind.NOT, ("A",), "Y"),
    "$_BUF_": CellSpec(GateKind.BUF, ("A",), "Y"),
    "$_DFF_P_": CellSpec(GateKind.DLATCH, ("D", "C"), "Q"),
}


def parse_cell_map(data: dict) -> dict[str, CellSpec]:
    """Build a cell map from ``{"type": {"kind": ..., "inputs": [...], "output": ...}}``."""
    out = {}
    for cell_type, spec in data.items():
        out[cell_type] = CellSpec(GateKind(spec["kind"]), tuple(spec["inputs"]), spec["output"])
    return out


def import_yosys_json(text: str, cell_map: dict[str, CellSpec] | None = None, top: str | None = None, clock: str = "clk") -> GateNetlist:
    cell_map = DEFAULT_CELL_MAP if cell_map is None else cell_map
    try:
        data = json.loads(text)
        modules = data["modules"]
        if top is None:
            if len(modules) != 1:
                raise NetlistError("several modules present; choose one with top=")
            top = next(iter(modules))
        mod = modules[top]
        ports = mod.get("ports", {})
        cells = mod.get("cells", {})
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise NetlistError(f"schema violation: {exc}") from exc

    nl = GateNetlist()
    nets: dict[object, int] = {}
    consts: dict[str, int] = {}

    def net_of(bit) -> int:
        if bit in ("0", "1"):
            if bit not in consts:
                kind = GateKind.CONST1 if bit == "1" else GateKind.CONST0
                consts[bit] = nl.add(kind, ())
            return consts[bit]
        if isinstance(bit, str):
            raise NetlistError(f"unsupported constant bit {bit!r}")
        if bit not in nets:
            nets[bit] = nl.new_net()
        return nets[bit]

    for name, port in ports.items():
        if port.get("direction") != "input":
            continue
        bits = port["bits"]
        if name == clock:
            if len(bits) != 1:
                raise NetlistError("clock port must be 1 bit")
            nl.clock = net_of(bits[0])
            continue
        for i, b in enumerate(bits):
            nl.inputs.append(PortBit(name, i, net_of(b)))

    pending = []
    for cname, cell in cells.items():
        spec = cell_map.get(cell["type"])
        if spec is None:
            raise NetlistError(f"unsupported cell '{cell['type']}' ({cname})")
        conns = cell["connections"]
        try:
            ins = [conns[p] for p in spec.inputs]
            outs = conns[spec.output]
        except KeyError as exc:
            raise NetlistError(f"schema violation: cell {cname} lacks pin {exc}") from exc
        if any(len(v) != 1 for v in ins) or len(outs) != 1:
            raise NetlistError(f"cell {cname} is not single-bit")
        pending.append((spec.kind, [v[0] for v in ins], outs[0], cname))

    for kind, ins, out, cname in pending:
        if kind is GateKind.DLATCH and nl.clock is None:
            raise NetlistError(f"flip-flop {cname} found but no '{clock}' input port")
        nl.add(kind, [net_of(b) for b in ins], label=cname if kind is GateKind.DLATCH else None,
               output=net_of(out))

    for name, port in ports.items():
        if port.get("direction") != "output":
            continue
        for i, b in enumerate(port["bits"]):
            nl.outputs.append(PortBit(name, i, net_of(b)))
    nl.check()
    return nl


def export_yosys_json(netlist: GateNetlist, module: str = "top") -> str:
    """Inverse of :func:`import_yosys_json` for the default cell map."""
    ports = {}
    bit = lambda n: n + 2  # yosys reserves 0 and 1 for constants  # noqa: E731
    if netlist.clock is not None:
        ports["clk"] = {"direction": "input", "bits": [bit(netlist.clock)]}
    for p in netlist.inputs:
        ports.setdefault(p.name, {"direction": "input", "bits": []})["bits"].append(bit(p.net))
    for p in netlist.outputs:
        ports.setdefault(p.name, {"direction": "output", "bits": []})["bits"].append(bit(p.net))
    rev = {spec.kind: (t, spec) for t, spec in DEFAULT_CELL_MAP.items()}
    cells = {}
    for k, g in enumerate(netlist.gates):
        if g.kind in (GateKind.CONST0, GateKind.CONST1):
            continue
        t, spec = rev[g.kind]
        conns = {pin: [bit(n)] for pin, n in zip(spec.inputs, g.inputs)}
        conns[spec.output] = [bit(g.output)]
        cells[g.label or f"g{k}"] = {"type": t, "connections": conns}
    const_nets = {g.output: ("1" if g.kind is GateKind.CONST1 else "0")
                  for g in netlist.gates if g.kind in (GateKind.CONST0, GateKind.CONST1)}
    for cell in cells.values():
        for pin, bits in cell["connections"].items():
            cell["connections"][pin] = [const_nets.get(b - 2, b) for b in bits]
    return json.dumps({"modules": {module: {"ports": ports, "cells": cells}}}, indent=2) + "\n"
