"""And-inverter graph with structural and functional hashing.

Literals follow the usual encoding ``2 * node + complement``.  Node 0 is the
constant false, so literal 0 is FALSE and literal 1 is TRUE.

When the graph has few enough variables every node carries its full truth
table as a Python integer (bit ``m`` is the value under the assignment whose
binary encoding is ``m``).  New AND nodes that compute an already known
function are then merged with the existing node, which removes redundancy
that structural hashing alone misses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

FALSE = 0
TRUE = 1

# truth tables of 2**20 bits are still cheap as Python integers
TRUTH_TABLE_LIMIT = 20


def lit_node(lit: int) -> int:
    return lit >> 1


def lit_neg(lit: int) -> bool:
    return bool(lit & 1)


def var_pattern(index: int, nvars: int) -> int:
    """Truth table of variable ``index`` over ``nvars`` variables."""
    half = 1 << index
    period = half << 1
    total = 1 << nvars
    unit = ((1 << half) - 1) << half
    reps = ((1 << total) - 1) // ((1 << period) - 1)
    return unit * reps


@dataclass
class Aig:
    var_names: list[str]
    use_tables: bool | None = None
    fanins: list[tuple[int, int]] = field(default_factory=list)
    _strash: dict[tuple[int, int], int] = field(default_factory=dict)
    _tables: list[int] = field(default_factory=list)
    _by_table: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.var_names)
        if self.use_tables is None:
            self.use_tables = n <= TRUTH_TABLE_LIMIT
        # node 0 is the constant, nodes 1..n are variables
        self.fanins = [(-1, -1)] * (n + 1)
        if self.use_tables:
            self.mask = (1 << (1 << n)) - 1
            self._tables = [0] + [var_pattern(i, n) for i in range(n)]
            self._by_table = {t: 2 * node for node, t in enumerate(self._tables)}

    # -- construction -----------------------------------------------------

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    def var(self, index: int) -> int:
        return 2 * (index + 1)

    def var_index(self, lit: int) -> int | None:
        node = lit >> 1
        return node - 1 if 1 <= node <= self.num_vars else None

    def is_and(self, lit: int) -> bool:
        return (lit >> 1) > self.num_vars

    def table(self, lit: int) -> int:
        t = self._tables[lit >> 1]
        return t ^ self.mask if lit & 1 else t

    def and_(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == FALSE or a == b ^ 1:
            return FALSE
        if a == TRUE or a == b:
            return b
        key = (a, b)
        hit = self._strash.get(key)
        if hit is not None:
            return hit
        if self.use_tables:
            t = self.table(a) & self.table(b)
            known = self._by_table.get(t)
            if known is None:
                known = self._by_table.get(t ^ self.mask)
                known = None if known is None else known ^ 1
            if known is not None:
                self._strash[key] = known
                return known
        node = len(self.fanins)
        self.fanins.append(key)
        lit = 2 * node
        if self.use_tables:
            self._tables.append(t)
            self._by_table[t] = lit
        self._strash[key] = lit
        return lit

    def or_(self, a: int, b: int) -> int:
        return self.and_(a ^ 1, b ^ 1) ^ 1

    def xor(self, a: int, b: int) -> int:
        return self.or_(self.and_(a, b ^ 1), self.and_(a ^ 1, b))

    def xnor(self, a: int, b: int) -> int:
        return self.xor(a, b) ^ 1

    def mux(self, sel: int, then: int, orelse: int) -> int:
        if then == orelse:
            return then
        return self.or_(self.and_(sel, then), self.and_(sel ^ 1, orelse))

    def and_all(self, lits) -> int:
        out = TRUE
        for lit in lits:
            out = self.and_(out, lit)
        return out

    def or_all(self, lits) -> int:
        out = FALSE
        for lit in lits:
            out = self.or_(out, lit)
        return out

    # -- analysis ---------------------------------------------------------

    def cone(self, roots) -> list[int]:
        """AND nodes reachable from ``roots`` in topological order."""
        seen: set[int] = set()
        order: list[int] = []
        stack = [(r >> 1, False) for r in roots]
        while stack:
            node, done = stack.pop()
            if done:
                order.append(node)
                continue
            if node in seen or node <= self.num_vars:
                continue
            seen.add(node)
            stack.append((node, True))
            a, b = self.fanins[node]
            stack.append((b >> 1, False))
            stack.append((a >> 1, False))
        return order

    def structural_support(self, lit: int) -> set[int]:
        nodes = {lit >> 1}
        for node in self.cone([lit]):
            a, b = self.fanins[node]
            nodes.update((a >> 1, b >> 1))
        return {n - 1 for n in nodes if 1 <= n <= self.num_vars}

    def support(self, lit: int) -> set[int]:
        """Variables the function of ``lit`` actually depends on."""
        if not self.use_tables:
            return self.structural_support(lit)
        t = self.table(lit)
        out = set()
        for i in range(self.num_vars):
            pat = self._tables[i + 1]
            if ((t & pat) >> (1 << i)) != (t & ~pat & self.mask):
                out.add(i)
        return out

    def simulate(self, patterns: list[int], roots, width_mask: int) -> dict[int, int]:
        """Bit-parallel evaluation: ``patterns[i]`` is the value stream of variable i."""
        values = {0: 0}
        for i, p in enumerate(patterns):
            values[i + 1] = p
        for node in self.cone(roots):
            a, b = self.fanins[node]
            va = values[a >> 1] ^ (width_mask if a & 1 else 0)
            vb = values[b >> 1] ^ (width_mask if b & 1 else 0)
            values[node] = va & vb
        return values

    def lit_value(self, values: dict[int, int], lit: int, width_mask: int) -> int:
        v = values[lit >> 1]
        return v ^ width_mask if lit & 1 else v

    def evaluate(self, lit: int, assignment: list[int]) -> int:
        """Value of ``lit`` under one assignment of 0/1 values to the variables."""
        values = self.simulate(list(assignment), [lit], 1)
        return self.lit_value(values, lit, 1)

    def substitute(self, lits: list[int], replace: dict[int, int]) -> list[int]:
        """Rebuild ``lits`` with variable index -> literal replacements applied."""
        memo: dict[int, int] = {0: FALSE}
        for i in range(self.num_vars):
            memo[i + 1] = replace.get(i, self.var(i))
        for node in self.cone(lits):
            a, b = self.fanins[node]
            la = memo[a >> 1] ^ (a & 1)
            lb = memo[b >> 1] ^ (b & 1)
            memo[node] = self.and_(la, lb)
        return [memo[lit >> 1] ^ (lit & 1) for lit in lits]

    def num_ands(self, roots) -> int:
        return len(self.cone(roots))
