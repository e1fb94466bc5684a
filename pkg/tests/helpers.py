"""Builders shared by several test modules."""

import itertools

from mdlc.frontend import parse
from mdlc.synth.interpret import step_behavior

FRAME = """
mechanicalmodule t();
  boundary {{
    line top {{(0,9), (9,9)}},
    line right {{(9,9), (9,0)}},
    line bottom {{(9,0), (0,0)}},
    line left {{(0,0), (0,9)}} }};
  module t (input wire clk{ports});
    {decls}
    always @(posedge clk) begin
      {body}
    end
  endmodule
endmechanicalmodule
"""


def behavior(ports: str, body: str, decls: str = ""):
    """BehaviorAst of a one-process module; ``ports`` starts with a comma."""
    return parse(FRAME.format(ports=ports, decls=decls, body=body)).behavior


def port_bits(behavior):
    ins = [(p.name, b) for p in behavior.ports if p.direction == "input" and p.name != "clk" for b in range(p.width)]
    regs = [(p.name, p.width) for p in behavior.ports if p.direction == "output"]
    regs += [(r.name, r.width) for r in behavior.regs]
    return ins, regs


def assignments(behavior):
    """Every (inputs, state) pair as word-level dicts for the interpreter."""
    ins, regs = port_bits(behavior)
    state_bits = [(n, b) for n, w in regs for b in range(w)]
    for values in itertools.product((0, 1), repeat=len(ins) + len(state_bits)):
        iv = dict(zip(ins, values[: len(ins)]))
        sv = dict(zip(state_bits, values[len(ins):]))
        yield pack(iv), pack(sv), iv, sv


def pack(bits):
    out = {}
    for (name, b), v in bits.items():
        out[name] = out.get(name, 0) | (v << b)
    return out


def netlist_matches_behavior(netlist, beh) -> int:
    """Exhaustively compare one clock edge of the netlist with the interpreter.

    Returns the number of assignments checked; raises AssertionError on the
    first disagreement.  Latch labels are ``name[bit]``.
    """
    count = 0
    for words_in, words_state, iv, sv in assignments(beh):
        want = step_behavior(beh, words_state, words_in)
        state = {f"{n}[{b}]": v for (n, b), v in sv.items()}
        nxt, _ = netlist.step(iv, state)
        for lab, v in nxt.items():
            name, _, rest = lab.partition("[")
            bit = int(rest[:-1]) if rest else 0
            assert v == (want[name] >> bit) & 1, (lab, iv, sv)
        count += 1
    return count


# -- maze checkpoints --------------------------------------------------------


def walls(left=1, up=1, right=1, down=1):
    return {"LEFT": left, "UP": up, "RIGHT": right, "DOWN": down}


# sensor sequences from reset (state LEFT) with the code expected after each tick
CHECKPOINTS = {
    # only RIGHT open while moving left: 00 -> 10
    "switch to right": [(walls(right=0), 0b10)],
    # reach UP, then right and front blocked: -> 00
    "up turns left": [(walls(up=0), 0b01), (walls(left=0), 0b00)],
    # reach RIGHT, then front and right blocked, back open: -> 11
    "right turns down": [(walls(right=0), 0b10), (walls(down=0), 0b11)],
}


def run_checkpoint(device, sequence):
    from mdlc.runtime import ACTUATOR, from_bits, sensor_inputs

    got = []
    for w, _ in sequence:
        got.append(from_bits(device.tick(sensor_inputs(w)).outputs, ACTUATOR))
    return got


def checkpoint_events(run) -> set:
    """Which checkpoint transitions occur along a maze run."""
    prev, seen = "LEFT", set()
    for s in run.steps:
        if prev == "LEFT" and s.direction == "RIGHT":
            seen.add("switch to right")
        if prev == "UP" and s.sensors["RIGHT"] and s.sensors["UP"] and s.direction == "LEFT":
            seen.add("up turns left")
        if prev == "RIGHT" and s.direction == "DOWN":
            seen.add("right turns down")
        prev = s.direction
    return seen


# -- lock --------------------------------------------------------------------


def lock_then_unlock(device, code, attempt) -> list[int]:
    """Door after: lock with ``code``, release, try ``attempt``, release."""
    from mdlc.runtime import run_scenario

    script = (
        f"set pass_in=0b{code:04b} action_btn=1 key=1; ticks 1\n"
        "set action_btn=0; ticks 1\n"
        f"set pass_in=0b{attempt:04b} action_btn=1 key=0; ticks 1\n"
        "set action_btn=0; ticks 1\n"
    )
    return [r.outputs["door"] for r in run_scenario(device, script).transcript]
