"""Logic synthesis: elaboration, basis mapping and netlist passes."""

from __future__ import annotations

from dataclasses import dataclass

from mdlc.frontend.ast import BehaviorAst
from mdlc.synth.elaborate import ElaborationError, FunctionTable, elaborate
from mdlc.synth.equivalence import EquivalenceError, check_equivalence
from mdlc.synth.mapping import map_to_basis
from mdlc.synth.netlist import Gate, GateKind, GateNetlist, NetlistError, PortBit
from mdlc.synth.passes import fix_hold, insert_io_buffers, isolate_loads, limit_fanout, prepare


@dataclass
class SynthesisResult:
    table: FunctionTable
    mapped: GateNetlist  # straight out of the mapper
    netlist: GateNetlist  # after the physical-robustness passes


def synthesize(behavior: BehaviorAst, io_buffers: bool = True, fanout_trees: bool = True) -> SynthesisResult:
    table = elaborate(behavior)
    mapped = map_to_basis(table)
    return SynthesisResult(table, mapped, prepare(mapped, io_buffers, fanout_trees))


__all__ = [
    "ElaborationError",
    "EquivalenceError",
    "FunctionTable",
    "Gate",
    "GateKind",
    "GateNetlist",
    "NetlistError",
    "PortBit",
    "SynthesisResult",
    "check_equivalence",
    "elaborate",
    "fix_hold",
    "insert_io_buffers",
    "isolate_loads",
    "limit_fanout",
    "map_to_basis",
    "prepare",
    "synthesize",
]
