"""Standard cells: mass/coupling motifs for each basis gate and the clocks.

Every logic signal lives on an in-phase mass.  Each cell adds one out-of-phase
intermediate mass and its own in-phase output mass, so a signal advances one
mass per half power-clock cycle and one gate per full cycle.  A linear
coupling always takes the phase of its upstream mass.

Cell sizes (masses, couplings) added on top of the input masses:

    NOR2    2, 3     NOT     2, 2     BUF     2, 2
    DLATCH 18, 22    CONST   1, 0

A clock stretcher (4 masses, 5 couplings) is shared by the latches on one
clock pin.

A ring of period P adds 2P masses and 2P couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from mdlc.techmap.network import CouplingKind, MassSpringNetwork, Phase

POS = CouplingKind.LINEAR_POS
NEG = CouplingKind.LINEAR_NEG
GATE = CouplingKind.NONLINEAR_GATE
IN = Phase.IN
OUT = Phase.OUT


def cell_nor(net: MassSpringNetwork, a: int, b: int, out: int | None = None, x0: float = 0.0, tag: str = "output", label: str = "") -> int:
    """Both inputs repel a biased intermediate, which drives the output.

    The intermediate sits in the opposite phase, so a plain positive link to
    the output carries its sign forward.  Only when both inputs are 0 do the
    negative links overcome the bias and lift the output to 1.
    """
    mid = net.add_mass(OUT, "intermediate", bias=1.0, x0=x0, label=f"{label}.i" if label else "")
    net.couple(a, mid, NEG, IN)
    net.couple(b, mid, NEG, IN)
    if out is None:
        out = net.add_mass(IN, tag, x0=x0, label=label)
    net.couple(mid, out, POS, OUT)
    return out


def cell_not(net: MassSpringNetwork, a: int, out: int | None = None, x0: float = 0.0, tag: str = "output", label: str = "") -> int:
    mid = net.add_mass(OUT, "intermediate", x0=x0, label=f"{label}.i" if label else "")
    net.couple(a, mid, NEG, IN)
    if out is None:
        out = net.add_mass(IN, tag, x0=x0, label=label)
    net.couple(mid, out, POS, OUT)
    return out


def cell_buf(net: MassSpringNetwork, a: int, out: int | None = None, x0: float = 0.0, tag: str = "output", label: str = "") -> int:
    mid = net.add_mass(OUT, "intermediate", x0=x0, label=f"{label}.i" if label else "")
    net.couple(a, mid, POS, IN)
    if out is None:
        out = net.add_mass(IN, tag, x0=x0, label=label)
    net.couple(mid, out, POS, OUT)
    return out


def cell_clock_stretch(net: MassSpringNetwork, c: int, label: str = "clk") -> int:
    """Inverted two-cycle copy of a one-cycle clock: NOR(C, BUF C).

    Reads 0 in the two cycles after each tick on ``c`` and 1 otherwise.
    One stretcher serves every latch on the same clock pin.
    """
    delayed = cell_buf(net, c, x0=-1.0, tag="clock", label=f"{label}.d")
    return cell_nor(net, c, delayed, x0=1.0, tag="clock", label=f"{label}.n")


def cell_dlatch(
    net: MassSpringNetwork,
    d: int,
    c: int,
    out: int | None = None,
    label: str = "",
    stretch: int | None = None,
) -> int:
    """Gated SR latch built from NOR, NOT and BUF cells.

    ``S = C.D`` and ``R = C.~D`` are formed against the stretched clock and
    drive a cross-coupled NOR pair.  The pair is a two-cycle loop holding
    two interleaved copies of the bit, and the two-cycle write pulse sets
    both.  Every internal mass drives at most two loads, so D, C and the
    stretcher output each see a single latch input.  D is sampled in the
    tick cycle and the one after it; Q is valid ``LATCH_DELAY`` cycles
    after the tick and starts at 0.
    """
    name = label or "latch"
    if stretch is None:
        stretch = cell_clock_stretch(net, c, label=f"{name}.clk")
    en = cell_buf(net, stretch, x0=1.0, tag="clock", label=f"{name}.en")
    nd = cell_not(net, d, x0=0.0, label=f"{name}.nd")
    nd2 = cell_buf(net, nd, x0=0.0, label=f"{name}.nd2")
    dd = cell_not(net, nd, x0=0.0, label=f"{name}.dd")
    s = cell_nor(net, en, nd2, x0=-1.0, label=f"{name}.s")
    r = cell_nor(net, en, dd, x0=-1.0, label=f"{name}.r")
    q = net.add_mass(IN, "output", x0=-1.0, label=f"{name}.q")
    qb = net.add_mass(IN, "output", x0=1.0, label=f"{name}.qb")
    cell_nor(net, r, qb, out=q, x0=-1.0, label=f"{name}.q")
    cell_nor(net, s, q, out=qb, x0=1.0, label=f"{name}.qb")
    if out is not None:
        net.masses[out].x0 = -1.0
    return cell_buf(net, q, out=out, x0=-1.0, label=label)


LATCH_DELAY = 6  # cycles from a tick on the C pin until Q is valid


def cell_const(net: MassSpringNetwork, value: int, label: str = "") -> int:
    """A lone in-phase mass held at 1 or 0 by a permanent bias force."""
    return net.add_mass(IN, "constant", bias=-1.0 if value else 1.0, x0=1.0 if value else -1.0, label=label)


# -- clocks -------------------------------------------------------------------


@dataclass
class ClockCircuit:
    output: int
    rings: list[list[int]]
    periods: tuple[int, ...]
    period: int
    latency: int  # cycles from a ring-output tick to a tick on ``output``
    notes: list[str] = field(default_factory=list)


def ring_tick_cycle(period: int, pulse: int) -> int:
    """Cycle (mod period) at which the ring output reads 1, pulse at even index."""
    return ((2 * period - pulse) // 2) % period


def generate_clock(net: MassSpringNetwork, period: int, tick_at: int = 0, label: str = "ring") -> ClockCircuit:
    """Closed loop of ``2 * period`` masses carrying one circulating 1.

    The pulse moves one mass per half cycle, so the output (mass 0 of the
    loop) reads 1 once every ``period`` power-clock cycles, first at cycle
    ``tick_at mod period``.  All other loop masses start at logic 0.
    """
    if period < 2:
        raise ValueError("ring period must be at least 2")
    n = 2 * period
    pulse = (2 * (period - tick_at)) % n
    ids = []
    for k in range(n):
        phase = IN if k % 2 == 0 else OUT
        ids.append(net.add_mass(phase, "clock-loop", x0=1.0 if k == pulse else -1.0, label=f"{label}[{k}]"))
    for k in range(n):
        phase = IN if k % 2 == 0 else OUT
        net.couple(ids[k], ids[(k + 1) % n], POS, phase)
    return ClockCircuit(ids[0], [ids], (period,), period, 0)


def compose_coprime_clocks(net: MassSpringNetwork, p1: int, p2: int, tick_at: int = 0) -> ClockCircuit:
    """AND of two rings: ticks only when both rings tick in the same cycle.

    Built as NOR(NOT r1, NOT r2).  The combined period is lcm(p1, p2), which
    equals the product only for coprime periods.  ``tick_at`` is the cycle
    (mod the combined period) of the first tick on the AND output.  A
    ``tick_at`` below the two-cycle AND latency loses its first tick, since
    the AND stages start idle; later ticks are unaffected.
    """
    period = math.lcm(p1, p2)
    notes = []
    if math.gcd(p1, p2) != 1:
        notes.append(f"ring periods {p1} and {p2} are not coprime; combined period is lcm = {period}")
    latency = 2
    t = (tick_at - latency) % period
    r1 = generate_clock(net, p1, t % p1, label="ring_a")
    r2 = generate_clock(net, p2, t % p2, label="ring_b")
    # start the AND masses consistent with the ring outputs at t = 0
    x1 = net.masses[r1.output].x0
    x2 = net.masses[r2.output].x0
    n1 = cell_not(net, r1.output, x0=-x1, tag="clock", label="clk_not_a")
    n2 = cell_not(net, r2.output, x0=-x2, tag="clock", label="clk_not_b")
    both = x1 > 0 and x2 > 0
    out = cell_nor(net, n1, n2, x0=1.0 if both else -1.0, tag="clock", label="clk_and")
    return ClockCircuit(out, r1.rings + r2.rings, (p1, p2), period, latency, notes)


def choose_ring_periods(fsm_period: int, max_ring: int = 20, min_ring: int = 3) -> tuple[int, ...]:
    """One ring if it fits, else the cheapest pair whose lcm is ``fsm_period``."""
    if fsm_period <= max_ring:
        return (fsm_period,)
    best = None
    for a in range(min_ring, max_ring + 1):
        for b in range(a, max_ring + 1):
            if math.lcm(a, b) == fsm_period:
                key = (a + b, b)
                if best is None or key < best[0]:
                    best = (key, (a, b))
    return best[1] if best else (fsm_period,)


def build_clock(net: MassSpringNetwork, fsm_period: int, tick_at: int, max_ring: int = 20) -> ClockCircuit:
    periods = choose_ring_periods(fsm_period, max_ring)
    if len(periods) == 1:
        clock = generate_clock(net, periods[0], tick_at % periods[0])
        if fsm_period > max_ring:
            clock.notes.append(f"no ring pair within {max_ring} yields period {fsm_period}; using one ring")
        return clock
    return compose_coprime_clocks(net, periods[0], periods[1], tick_at)
