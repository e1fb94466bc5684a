"""Elaboration of the clocked process into next-state functions.

Every register bit becomes one AIG literal over the primary-input bits and the
current register bits.  Control flow is turned into multiplexers: both arms of
an ``if`` are elaborated from the same starting environment and merged on the
condition, and a ``case`` becomes a priority chain so the first matching item
wins.  A register untouched on some path keeps its current value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mdlc.frontend.ast import (
    Assign,
    BehaviorAst,
    Binary,
    Block,
    Case,
    Const,
    Expr,
    If,
    Index,
    Ref,
    Stmt,
    Unary,
)
from mdlc.synth.aig import FALSE, TRUE, Aig

Bit = tuple[str, int]


class ElaborationError(Exception):
    pass


@dataclass
class FunctionTable:
    """Next-state functions of a synchronous design.

    ``inputs`` and ``state`` list the variable bits in AIG variable order
    (inputs first).  ``outputs`` name the output-port bits; these are always
    registers, so each is also a key of ``next_state``.
    """

    aig: Aig
    inputs: list[Bit]
    state: list[Bit]
    next_state: dict[Bit, int]
    outputs: list[Bit]
    state_vars: dict[Bit, int] = field(default_factory=dict)
    widths: dict[str, int] = field(default_factory=dict)
    dropped: list[Bit] = field(default_factory=list)

    @property
    def num_bits(self) -> int:
        return len(self.inputs) + len(self.state)

    def input_lit(self, bit: Bit) -> int:
        return self.aig.var(self.inputs.index(bit))

    def state_lit(self, bit: Bit) -> int:
        return self.aig.var(self.state_vars[bit])

    def evaluate(self, inputs: dict[Bit, int], state: dict[Bit, int]) -> dict[Bit, int]:
        """Next-state bits for one concrete assignment."""
        assignment = [0] * self.aig.num_vars
        for k, bit in enumerate(self.inputs):
            assignment[k] = inputs.get(bit, 0)
        for bit, var in self.state_vars.items():
            assignment[var] = state.get(bit, 0)
        return {bit: self.aig.evaluate(lit, assignment) for bit, lit in self.next_state.items()}


def bit_name(bit: Bit) -> str:
    return f"{bit[0]}[{bit[1]}]"


def _const_bits(value: int, width: int) -> list[int]:
    return [TRUE if (value >> i) & 1 else FALSE for i in range(width)]


class _Elaborator:
    def __init__(self, behavior: BehaviorAst):
        self.b = behavior
        self.params = {lp.name: lp.value for lp in behavior.localparams}
        self.widths: dict[str, int] = {p.name: p.width for p in behavior.ports}
        self.widths.update({r.name: r.width for r in behavior.regs})
        self.input_names = [p.name for p in behavior.ports if p.direction == "input" and p.name != "clk"]
        self.output_names = [p.name for p in behavior.ports if p.direction == "output"]
        self.reg_names = self.output_names + [r.name for r in behavior.regs]

        self.kinds: dict[str, set[bool]] = {}
        for proc in behavior.processes:
            self._collect_kinds(proc.body)
        for name, kinds in self.kinds.items():
            if name not in self.reg_names:
                raise ElaborationError(f"assignment to non-register '{name}'")
            if len(kinds) > 1:
                raise ElaborationError(f"'{name}' mixes blocking and nonblocking assignment")

        self.input_bits = [(n, i) for n in self.input_names for i in range(self.widths[n])]
        self.reg_bits = [(n, i) for n in self.reg_names for i in range(self.widths[n])]
        names = [bit_name(b) for b in self.input_bits + self.reg_bits]
        self.aig = Aig(names)

    def _collect_kinds(self, s: Stmt) -> None:
        if isinstance(s, Assign):
            self.kinds.setdefault(s.target, set()).add(s.blocking)
        elif isinstance(s, Block):
            for inner in s.body:
                self._collect_kinds(inner)
        elif isinstance(s, If):
            self._collect_kinds(s.then)
            if s.orelse is not None:
                self._collect_kinds(s.orelse)
        elif isinstance(s, Case):
            for item in s.items:
                self._collect_kinds(item.body)
            if s.default is not None:
                self._collect_kinds(s.default)

    # -- expressions ------------------------------------------------------

    def expr(self, e: Expr, env: dict[str, list[int]]) -> list[int]:
        g = self.aig
        if isinstance(e, Const):
            width = e.width if e.width is not None else max(1, e.value.bit_length())
            if e.value >> width:
                raise ElaborationError(f"constant {e.value} does not fit in {width} bits")
            return _const_bits(e.value, width)
        if isinstance(e, Ref):
            if e.name in self.params:
                return self.expr(self.params[e.name], env)
            if e.name not in env:
                raise ElaborationError(f"undeclared identifier '{e.name}'")
            return list(env[e.name])
        if isinstance(e, Index):
            if e.name in self.params:
                return [self.expr(self.params[e.name], env)[e.bit]]
            bits = env.get(e.name)
            if bits is None or not 0 <= e.bit < len(bits):
                raise ElaborationError(f"bad bit-select {e.name}[{e.bit}]")
            return [bits[e.bit]]
        if isinstance(e, Unary):
            bits = self.expr(e.operand, env)
            if e.op == "!":
                return [g.or_all(bits) ^ 1]
            return [b ^ 1 for b in bits]
        if isinstance(e, Binary):
            left = self.expr(e.left, env)
            right = self.expr(e.right, env)
            if e.op == "&&":
                return [g.and_(g.or_all(left), g.or_all(right))]
            if e.op == "||":
                return [g.or_(g.or_all(left), g.or_all(right))]
            width = max(len(left), len(right))
            left = left + [FALSE] * (width - len(left))
            right = right + [FALSE] * (width - len(right))
            if e.op in ("==", "!="):
                eq = self.equal(left, right)
                return [eq if e.op == "==" else eq ^ 1]
            fn = {"&": g.and_, "|": g.or_, "^": g.xor}[e.op]
            return [fn(a, b) for a, b in zip(left, right)]
        raise ElaborationError(f"unsupported expression {e!r}")

    def equal(self, left: list[int], right: list[int]) -> int:
        width = max(len(left), len(right))
        left = left + [FALSE] * (width - len(left))
        right = right + [FALSE] * (width - len(right))
        return self.aig.and_all(self.aig.xnor(a, b) for a, b in zip(left, right))

    def truth(self, e: Expr, env) -> int:
        return self.aig.or_all(self.expr(e, env))

    # -- statements -------------------------------------------------------

    def merge(self, cond: int, a: dict, b: dict) -> dict:
        out = {}
        for name in a:
            out[name] = [self.aig.mux(cond, x, y) for x, y in zip(a[name], b[name])]
        return out

    def stmt(self, s: Stmt, env: dict, pending: dict) -> tuple[dict, dict]:
        if isinstance(s, Assign):
            value = self.expr(s.expr, env)
            width = self.widths[s.target] if s.bit is None else 1
            if len(value) > width:
                raise ElaborationError(
                    f"width mismatch: {len(value)}-bit value assigned to "
                    f"{width}-bit target '{s.target}'"
                )
            value = value + [FALSE] * (width - len(value))
            target = env if s.blocking else pending
            target = dict(target)
            if s.bit is None:
                target[s.target] = value
            else:
                bits = list(target[s.target])
                bits[s.bit] = value[0]
                target[s.target] = bits
            return (target, pending) if s.blocking else (env, target)
        if isinstance(s, Block):
            for inner in s.body:
                env, pending = self.stmt(inner, env, pending)
            return env, pending
        if isinstance(s, If):
            cond = self.truth(s.cond, env)
            e1, p1 = self.stmt(s.then, env, pending)
            e2, p2 = (env, pending) if s.orelse is None else self.stmt(s.orelse, env, pending)
            return self.merge(cond, e1, e2), self.merge(cond, p1, p2)
        if isinstance(s, Case):
            subject = self.expr(s.subject, env)
            arms = []
            for item in s.items:
                hit = self.aig.or_all(self.equal(subject, self.expr(lab, env)) for lab in item.labels)
                arms.append((hit, item.body))
            res = (env, pending) if s.default is None else self.stmt(s.default, env, pending)
            for hit, body in reversed(arms):
                e1, p1 = self.stmt(body, env, pending)
                res = (self.merge(hit, e1, res[0]), self.merge(hit, p1, res[1]))
            return res
        raise ElaborationError(f"unsupported statement {s!r}")

    # -- driver -----------------------------------------------------------

    def run(self, prune: bool = True) -> FunctionTable:
        g = self.aig
        nin = len(self.input_bits)
        current: dict[str, list[int]] = {}
        for k, (name, bit) in enumerate(self.input_bits):
            current.setdefault(name, []).append(g.var(k))
        for k, (name, bit) in enumerate(self.reg_bits):
            current.setdefault(name, []).append(g.var(nin + k))
        regs = {n: current[n] for n in self.reg_names}
        env = dict(current)
        pending = dict(regs)
        if len(self.b.processes) != 1:
            raise ElaborationError("exactly one clocked process is required")
        env, pending = self.stmt(self.b.process.body, env, pending)

        next_state: dict[Bit, int] = {}
        for name in self.reg_names:
            blocking = self.kinds.get(name) == {True}
            bits = env[name] if blocking else pending[name]
            for i, lit in enumerate(bits):
                next_state[(name, i)] = lit
        state_var = {bit: nin + k for k, bit in enumerate(self.reg_bits)}

        # registers never assigned stay at their reset value of zero
        replace = {state_var[(n, i)]: FALSE for n in self.reg_names if n not in self.kinds
                   for i in range(self.widths[n])}

        outputs = [(n, i) for n in self.output_names for i in range(self.widths[n])]
        keep = set(outputs)
        if prune:
            # keep only registers whose current value can reach an output
            frontier = list(keep)
            while frontier:
                bit = frontier.pop()
                for var in g.support(next_state[bit]):
                    if var >= nin:
                        dep = self.reg_bits[var - nin]
                        if dep not in keep:
                            keep.add(dep)
                            frontier.append(dep)
        else:
            keep = set(self.reg_bits)
        dropped = [bit for bit in self.reg_bits if bit not in keep]
        for bit in dropped:
            replace[state_var[bit]] = FALSE
        kept = [bit for bit in self.reg_bits if bit in keep]
        if replace:
            lits = g.substitute([next_state[b] for b in kept], replace)
            next_state = dict(zip(kept, lits))
        else:
            next_state = {b: next_state[b] for b in kept}
        return FunctionTable(
            aig=g,
            inputs=list(self.input_bits),
            state=kept,
            next_state=next_state,
            outputs=outputs,
            widths=dict(self.widths),
            dropped=dropped,
            state_vars={b: state_var[b] for b in kept},
        )


def elaborate(behavior: BehaviorAst, prune: bool = True) -> FunctionTable:
    """Build next-state functions for every register bit of ``behavior``.

    With ``prune`` set, registers that cannot influence an output are dropped;
    a typical case is a blocking temporary that is always written before it
    is read, whose stored value is dead.
    """
    return _Elaborator(behavior).run(prune)
