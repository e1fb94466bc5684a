"""Scripted input scenarios for devices such as the code lock.

One phase per line, statements separated by ``;``::

    set pass_in=1001 action_btn=1 key=1; ticks 1; expect door=1

Plain digit strings are binary, most significant bit first; ``0b``/``0x``
prefixes and decimal via ``0d`` are accepted too.  Inputs keep their values
across phases and start at 0.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from mdlc.runtime.device import from_bits, to_bits

_ASSIGN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)=(\S+)$")


class ScenarioError(ValueError):
    pass


@dataclass
class Phase:
    line: int
    inputs: dict[str, int] = field(default_factory=dict)
    ticks: int = 1
    expect: dict[str, int] = field(default_factory=dict)


def parse_value(text: str) -> int:
    t = text.lower().replace("_", "")
    try:
        if t.startswith("0b"):
            return int(t[2:], 2)
        if t.startswith("0x"):
            return int(t[2:], 16)
        if t.startswith("0d"):
            return int(t[2:], 10)
        if set(t) <= {"0", "1"} and t:
            return int(t, 2)
    except ValueError:
        pass
    raise ScenarioError(f"bad value {text!r}")


def _assignments(words: list[str], line: int) -> dict[str, int]:
    out = {}
    for w in words:
        m = _ASSIGN.match(w)
        if not m:
            raise ScenarioError(f"line {line}: expected name=value, got {w!r}")
        out[m.group(1)] = parse_value(m.group(2))
    return out


def parse_scenario(text: str) -> list[Phase]:
    phases = []
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        phase = Phase(no)
        for stmt in filter(None, (s.strip() for s in body.split(";"))):
            words = stmt.split()
            op, args = words[0].lower(), words[1:]
            if op == "set":
                phase.inputs.update(_assignments(args, no))
            elif op == "expect":
                phase.expect.update(_assignments(args, no))
            elif op == "ticks":
                if len(args) != 1 or not args[0].isdigit():
                    raise ScenarioError(f"line {no}: ticks needs one non-negative integer")
                phase.ticks = int(args[0])
            else:
                raise ScenarioError(f"line {no}: unknown statement {op!r}")
        phases.append(phase)
    return phases


def port_widths(keys) -> dict[str, int]:
    widths: dict[str, int] = {}
    for name, bit in keys:
        widths[name] = max(widths.get(name, 0), bit + 1)
    return widths


@dataclass
class TickRecord:
    phase: int
    tick: int
    inputs: dict[str, int]
    outputs: dict[str, int]
    state: dict[str, int]


@dataclass
class Expectation:
    phase: int
    line: int
    name: str
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class ScenarioResult:
    transcript: list[TickRecord]
    checks: list[Expectation]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Expectation]:
        return [c for c in self.checks if not c.ok]

    def format(self) -> str:
        lines = []
        for r in self.transcript:
            ins = " ".join(f"{k}={v}" for k, v in r.inputs.items())
            outs = " ".join(f"{k}={v}" for k, v in r.outputs.items())
            lines.append(f"phase {r.phase} tick {r.tick}: {ins} -> {outs}")
        for c in self.checks:
            verdict = "ok" if c.ok else "FAIL"
            lines.append(f"phase {c.phase} (line {c.line}): expect {c.name}={c.expected} got {c.actual} {verdict}")
        return "\n".join(lines) + ("\n" if lines else "")


def _device_ports(device) -> tuple[dict[str, int], dict[str, int]]:
    if hasattr(device, "network"):
        net = device.network
        return port_widths(net.sensors), port_widths(net.actuators)
    nl = device.netlist
    return port_widths(p.key for p in nl.inputs), port_widths(p.key for p in nl.outputs)


def run_scenario(device, phases: list[Phase] | str) -> ScenarioResult:
    """Drive ``device`` through the phases; expectations are checked after each phase."""
    if isinstance(phases, str):
        phases = parse_scenario(phases)
    in_w, out_w = _device_ports(device)
    current = {name: 0 for name in in_w}
    transcript: list[TickRecord] = []
    checks: list[Expectation] = []
    outputs = {name: 0 for name in out_w}
    for k, phase in enumerate(phases):
        for name, value in phase.inputs.items():
            if name not in in_w:
                raise ScenarioError(f"line {phase.line}: unknown input {name!r}")
            if value >> in_w[name]:
                raise ScenarioError(f"line {phase.line}: value {value} does not fit {name}[{in_w[name]}]")
            current[name] = value
        for name in phase.expect:
            if name not in out_w:
                raise ScenarioError(f"line {phase.line}: unknown output {name!r}")
        bits = {}
        for name, value in current.items():
            bits.update(to_bits(name, value, in_w[name]))
        for _ in range(phase.ticks):
            res = device.tick(bits)
            outputs = {name: from_bits(res.outputs, name) for name in out_w}
            transcript.append(TickRecord(k, device.ticks, dict(current), outputs, dict(res.state)))
        for name, value in phase.expect.items():
            checks.append(Expectation(k, phase.line, name, value, outputs[name]))
    return ScenarioResult(transcript, checks)
