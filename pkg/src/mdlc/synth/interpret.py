"""Direct interpreter for the clocked process.

This executes the statement tree on concrete integers and is deliberately
independent of the AIG route; equivalence tests compare the two.
"""

from __future__ import annotations

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


def _const_width(c: Const) -> int:
    return c.width if c.width is not None else max(1, c.value.bit_length())


class Interpreter:
    def __init__(self, behavior: BehaviorAst):
        self.behavior = behavior
        self.params = {lp.name: lp.value for lp in behavior.localparams}
        self.widths = {p.name: p.width for p in behavior.ports}
        self.widths.update({r.name: r.width for r in behavior.regs})
        self.registers = [p.name for p in behavior.ports if p.direction == "output"]
        self.registers += [r.name for r in behavior.regs]

    def value(self, e: Expr, env: dict[str, int]) -> tuple[int, int]:
        """Return ``(value, width)``."""
        if isinstance(e, Const):
            return e.value, _const_width(e)
        if isinstance(e, Ref):
            if e.name in self.params:
                return self.value(self.params[e.name], env)
            return env[e.name], self.widths[e.name]
        if isinstance(e, Index):
            return (env[e.name] >> e.bit) & 1, 1
        if isinstance(e, Unary):
            v, w = self.value(e.operand, env)
            if e.op == "!":
                return int(v == 0), 1
            return ~v & ((1 << w) - 1), w
        if isinstance(e, Binary):
            lv, lw = self.value(e.left, env)
            rv, rw = self.value(e.right, env)
            op = e.op
            if op == "&&":
                return int(bool(lv) and bool(rv)), 1
            if op == "||":
                return int(bool(lv) or bool(rv)), 1
            if op == "==":
                return int(lv == rv), 1
            if op == "!=":
                return int(lv != rv), 1
            w = max(lw, rw)
            if op == "&":
                return lv & rv, w
            if op == "|":
                return lv | rv, w
            if op == "^":
                return lv ^ rv, w
        raise ValueError(f"cannot evaluate {e!r}")

    def execute(self, s: Stmt, env: dict[str, int], pending: dict[str, int]) -> None:
        if isinstance(s, Assign):
            v, _ = self.value(s.expr, env)
            width = self.widths[s.target]
            if s.bit is None:
                new = v & ((1 << width) - 1)
            else:
                base = pending.get(s.target, env[s.target]) if not s.blocking else env[s.target]
                new = (base & ~(1 << s.bit)) | ((v & 1) << s.bit)
            if s.blocking:
                env[s.target] = new
            else:
                pending[s.target] = new
        elif isinstance(s, Block):
            for inner in s.body:
                self.execute(inner, env, pending)
        elif isinstance(s, If):
            cond, _ = self.value(s.cond, env)
            if cond:
                self.execute(s.then, env, pending)
            elif s.orelse is not None:
                self.execute(s.orelse, env, pending)
        elif isinstance(s, Case):
            subject, _ = self.value(s.subject, env)
            for item in s.items:
                if any(self.value(lab, env)[0] == subject for lab in item.labels):
                    self.execute(item.body, env, pending)
                    return
            if s.default is not None:
                self.execute(s.default, env, pending)
        else:
            raise ValueError(f"cannot execute {s!r}")

    def step(self, state: dict[str, int], inputs: dict[str, int]) -> dict[str, int]:
        """One clock edge: returns the next value of every register."""
        env = {name: 0 for name in self.registers}
        env.update(state)
        env.update(inputs)
        pending: dict[str, int] = {}
        self.execute(self.behavior.process.body, env, pending)
        out = {name: env[name] for name in self.registers}
        out.update(pending)
        return out


def step_behavior(behavior: BehaviorAst, state: dict[str, int], inputs: dict[str, int]) -> dict[str, int]:
    return Interpreter(behavior).step(state, inputs)
