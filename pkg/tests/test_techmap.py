import json
import math

import numpy as np
import pytest

from mdlc.dynamics import ForceSchedule, simulate
from mdlc.runtime import LogicDevice, PhysicalDevice
from mdlc.synth import GateKind, GateNetlist, PortBit, prepare
from mdlc.techmap import (
    LATCH_DELAY,
    TICK_LEAD,
    CouplingKind,
    MassSpringNetwork,
    Phase,
    TechmapError,
    build_clock,
    cell_buf,
    cell_clock_stretch,
    cell_const,
    cell_dlatch,
    cell_nor,
    cell_not,
    choose_ring_periods,
    compose_coprime_clocks,
    generate_clock,
    map_netlist,
    min_fsm_period,
    output_depth,
)


def grown(fn, n_inputs):
    net = MassSpringNetwork()
    ins = [net.add_mass(Phase.IN, "sensor") for _ in range(n_inputs)]
    m0, c0 = net.num_masses, len(net.couplings)
    out = fn(net, *ins)
    return net, ins, out, net.num_masses - m0, len(net.couplings) - c0


def drive(net, masses, bits, cycles):
    sched = ForceSchedule()
    for m, b in zip(masses, bits):
        sched.add(m, 0, cycles, 1.0 if b else -1.0)
    return simulate(net, cycles, sched)


def tick_cycles(trace, mass):
    return np.nonzero(trace.logic(mass))[0]


# -- cell structure -------------------------------------------------------


@pytest.mark.parametrize(
    "fn, n_in, masses, couplings",
    [
        (lambda net, a, b: cell_nor(net, a, b), 2, 2, 3),
        (lambda net, a: cell_not(net, a), 1, 2, 2),
        (lambda net, a: cell_buf(net, a), 1, 2, 2),
        (lambda net, d, c: cell_dlatch(net, d, c), 2, 18 + 4, 22 + 5),
        (lambda net: cell_const(net, 1), 0, 1, 0),
    ],
)
def test_cell_sizes(fn, n_in, masses, couplings):
    _, _, _, dm, dc = grown(fn, n_in)
    assert (dm, dc) == (masses, couplings)


def test_shared_stretcher_size():
    net = MassSpringNetwork()
    d, c = net.add_mass(Phase.IN), net.add_mass(Phase.IN)
    st = cell_clock_stretch(net, c)
    m0 = net.num_masses
    cell_dlatch(net, d, c, stretch=st)
    assert net.num_masses - m0 == 18
    assert sum(1 for m in net.masses if m.tag == "clock") >= 2


def test_nor_structure():
    net, (a, b), out, _, _ = grown(lambda net, a, b: cell_nor(net, a, b), 2)
    mid = out - 1
    assert net.masses[mid].phase is Phase.OUT and net.masses[mid].bias == 1.0
    assert net.masses[out].phase is Phase.IN and net.masses[out].bias == 0.0
    kinds = [(c.i, c.j, c.kind) for c in net.couplings]
    assert (a, mid, CouplingKind.LINEAR_NEG) in kinds
    assert (b, mid, CouplingKind.LINEAR_NEG) in kinds


def test_biased_masses_are_nor_intermediates(maze_net):
    for m in maze_net.masses:
        if m.bias > 0:
            assert m.tag == "intermediate" and m.phase is Phase.OUT
        elif m.bias < 0:
            assert m.tag == "constant"


def test_chain_fuses_output_and_input():
    net = MassSpringNetwork()
    a, b, c = (net.add_mass(Phase.IN) for _ in range(3))
    first = cell_nor(net, a, b)
    before = net.num_masses
    cell_nor(net, first, c)
    assert net.num_masses - before == 2
    assert any(cp.i == first for cp in net.couplings[-3:])


def test_tied_nor_is_legal_not():
    net = MassSpringNetwork()
    a = net.add_mass(Phase.IN, "sensor")
    out = cell_nor(net, a, a)
    net.check()
    for bit, want in ((0, 1), (1, 0)):
        tr = drive(net, [a], [bit], 8)
        assert tr.logic(out)[-1] == want
        assert abs(tr.samples[-1, out]) > 0.5


def test_buf_from_constant_one():
    net = MassSpringNetwork()
    one = cell_const(net, 1)
    out = cell_buf(net, one)
    tr = simulate(net, 4)
    assert list(tr.logic(out)[1:]) == [1, 1, 1]


@pytest.mark.parametrize("cell, bit, want", [(cell_not, 0, 1), (cell_not, 1, 0), (cell_buf, 0, 0), (cell_buf, 1, 1)])
def test_unary_cells_by_ode(cell, bit, want):
    net = MassSpringNetwork()
    a = net.add_mass(Phase.IN, "sensor")
    out = cell(net, a)
    assert drive(net, [a], [bit], 3).logic(out)[-1] == want


def test_constant_zero_holds():
    net = MassSpringNetwork()
    z = cell_const(net, 0)
    assert list(simulate(net, 5).logic(z)) == [0] * 5


# -- latch -----------------------------------------------------------------


def latch_net(period=12):
    nl = GateNetlist()
    d, clk = nl.new_net(), nl.new_net()
    nl.clock = clk
    q = nl.add(GateKind.DLATCH, (d, clk), label="q[0]")
    nl.inputs = [PortBit("d", 0, d)]
    nl.outputs = [PortBit("q", 0, q)]
    nl = prepare(nl)
    return nl, map_netlist(nl, fsm_period=period)


def test_latch_copies_on_tick_and_holds():
    nl, net = latch_net()
    dev = PhysicalDevice(net)
    q = net.latches["q[0]"]
    prev = 0
    for bit in (1, 1, 0, 1, 0, 0, 1):
        res = dev.tick({("d", 0): bit})
        assert res.outputs[("q", 0)] == bit
        row = (dev.last_samples[:, q] > 0).astype(int)
        changes = np.nonzero(np.diff(np.r_[prev, row]))[0]
        assert len(changes) <= 1
        prev = row[-1]


def test_latch_ignores_data_between_ticks():
    _, net = latch_net()
    P = net.fsm_period
    d = net.sensors[("d", 0)]
    sched = ForceSchedule()
    values = [1, 0, 0, 1, 1, 0]
    for w, v in enumerate(values):
        # the data value is only valid around the capture cycles
        sched.add(d, w * P, w * P + 7, 1.0 if v else -1.0)
        sched.add(d, w * P + 7, (w + 1) * P, -1.0 if v else 1.0)
    tr = simulate(net, P * len(values), sched)
    q = tr.logic(net.latches["q[0]"]).reshape(len(values), P)
    assert list(q[:, -1]) == values


def test_latch_starts_at_zero():
    _, net = latch_net()
    assert net.masses[net.latches["q[0]"]].x0 == -1.0


# -- clocks ----------------------------------------------------------------


@pytest.mark.parametrize("period", [4, 5, 6, 8])
def test_ring_ticks_once_per_period(period):
    net = MassSpringNetwork()
    clock = generate_clock(net, period)
    assert len(clock.rings[0]) == 2 * period
    assert sum(1 for m in net.masses if m.x0 == 1.0) == 1
    ticks = tick_cycles(simulate(net, 10 * period), clock.output)
    assert list(ticks) == list(range(0, 10 * period, period))


def test_ring_tick_offset():
    net = MassSpringNetwork()
    clock = generate_clock(net, 6, tick_at=4)
    assert list(tick_cycles(simulate(net, 18), clock.output)) == [4, 10, 16]


def test_ring_period_too_small():
    with pytest.raises(ValueError):
        generate_clock(MassSpringNetwork(), 1)


@pytest.mark.parametrize("p1, p2, period", [(4, 6, 12), (4, 4, 4), (3, 4, 12)])
def test_composed_clock_period(p1, p2, period):
    net = MassSpringNetwork()
    clock = compose_coprime_clocks(net, p1, p2, tick_at=3)
    assert clock.period == period == math.lcm(p1, p2)
    ticks = tick_cycles(simulate(net, 4 * period), clock.output)
    assert list(ticks) == list(range(3, 4 * period, period))
    assert bool(clock.notes) == (math.gcd(p1, p2) != 1)


def test_composed_clock_early_tick_dropped():
    net = MassSpringNetwork()
    clock = compose_coprime_clocks(net, 4, 6, tick_at=1)
    assert list(tick_cycles(simulate(net, 48), clock.output)) == [13, 25, 37]


def test_sixty_cycle_clock():
    assert choose_ring_periods(60) == (5, 12)
    net = MassSpringNetwork()
    clock = build_clock(net, 60, tick_at=17)
    assert list(tick_cycles(simulate(net, 180), clock.output)) == [17, 77, 137]


def test_single_ring_when_it_fits():
    assert choose_ring_periods(14) == (14,)


# -- whole-netlist mapping ------------------------------------------------


def test_mass_counts(maze_net, lock_net):
    assert 100 <= maze_net.num_masses <= 350
    assert 170 <= lock_net.num_masses <= 560


@pytest.mark.parametrize("fixture", ["maze", "lock"])
def test_affine_mass_count(fixture, request):
    nl = request.getfixturevalue(f"{fixture}_synth").netlist
    net = request.getfixturevalue(f"{fixture}_net")
    c = nl.counts()
    comb = c["NOR2"] + c["NOT"] + c["BUF"]
    pins = len({g.inputs[1] for g in nl.latches})
    ring = sum(len(r) for r in net.rings)
    clock_and, root = 6, 1
    assert net.num_masses == nl.num_nets + comb + 17 * c["DLATCH"] + 4 * pins + ring + clock_and + root
    couplings = 3 * c["NOR2"] + 2 * (c["NOT"] + c["BUF"]) + 22 * c["DLATCH"] + 5 * pins + ring + 7 + 2
    assert len(net.couplings) == couplings


@pytest.mark.parametrize("fixture", ["maze_net", "lock_net"])
def test_network_invariants(fixture, request):
    net = request.getfixturevalue(fixture)
    for c in net.couplings:
        if c.kind is not CouplingKind.NONLINEAR_GATE:
            assert net.masses[c.i].phase is not net.masses[c.j].phase
            assert c.phase is net.masses[c.i].phase
    for ring in net.rings:
        assert sum(1 for m in ring if net.masses[m].x0 == 1.0) == 1
    for m in net.masses:
        assert m.x0 in (-1.0, 0.0, 1.0)
    assert not any(c.kind is CouplingKind.NONLINEAR_GATE for c in net.couplings)
    for key, m in {**net.sensors, **net.actuators}.items():
        assert net.masses[m].phase is Phase.IN
    assert {net.masses[m].tag for m in net.sensors.values()} == {"sensor"}
    assert {net.masses[m].tag for m in net.actuators.values()} == {"actuator"}
    assert net.fsm_period == 60


def test_every_net_is_one_mass(maze_synth, maze_net):
    assert maze_net.num_masses >= maze_synth.netlist.num_nets
    labels = {m.label for m in maze_net.masses}
    for p in maze_synth.netlist.inputs:
        assert f"{p.name}[{p.bit}]" in labels


def test_combinational_design_without_clock():
    nl = GateNetlist()
    a = nl.new_net()
    y = nl.add(GateKind.BUF, (a,))
    nl.inputs = [PortBit("a", 0, a)]
    nl.outputs = [PortBit("y", 0, y)]
    net = map_netlist(nl)
    assert (net.num_masses, len(net.couplings)) == (3, 2)
    assert net.rings == [] and net.fsm_period == 0


def test_timing_guard(maze_synth):
    nl = maze_synth.netlist
    need = min_fsm_period(nl.depth(), output_depth(nl))
    assert need == max(2 * nl.depth() + 2, nl.depth() + output_depth(nl) + TICK_LEAD + 1)
    with pytest.raises(TechmapError, match=f"need at least {need}"):
        map_netlist(nl, fsm_period=need - 1)
    assert map_netlist(nl, fsm_period=need).fsm_period == need


def test_tick_cycle_leaves_room_for_outputs(maze_net, maze_synth):
    assert maze_net.tick_cycle == 60 - TICK_LEAD - output_depth(maze_synth.netlist)
    assert maze_net.tick_cycle + LATCH_DELAY + output_depth(maze_synth.netlist) < maze_net.sample_cycle + 1


def test_requires_clock(maze_synth):
    with pytest.raises(TechmapError, match="design requires clock"):
        map_netlist(maze_synth.netlist, auto_clock=False)


def test_latches_per_clock_pin_limited():
    nl = GateNetlist()
    clk = nl.new_net()
    nl.clock = clk
    for k in range(3):
        d = nl.new_net()
        nl.inputs.append(PortBit("d", k, d))
        q = nl.add(GateKind.DLATCH, (d, clk), label=f"q[{k}]")
        nl.outputs.append(PortBit("q", k, q))
    with pytest.raises(TechmapError, match="more than two latches"):
        map_netlist(nl, fsm_period=20)


def test_network_json_round_trip(lock_net):
    text = lock_net.to_json()
    again = MassSpringNetwork.from_json(text)
    assert again.to_json() == text
    data = json.loads(text)
    assert list(data["masses"][0]) == ["id", "phase", "bias", "x0", "v0", "tag", "label"]
    assert list(data["couplings"][0]) == ["i", "j", "kind", "phase"]


def test_network_json_version_checked(lock_net):
    data = lock_net.to_dict()
    data["format_version"] = 99
    with pytest.raises(ValueError, match="format_version"):
        MassSpringNetwork.from_dict(data)


def test_small_design_physics_matches_netlist():
    from helpers import behavior
    from mdlc.synth import synthesize

    beh = behavior(", input wire a, input wire b, output reg y", "y <= (a == b) || y;")
    nl = synthesize(beh).netlist
    net = map_netlist(nl, fsm_period=min_fsm_period(nl.depth(), output_depth(nl)))
    phys, ref = PhysicalDevice(net), LogicDevice(nl)
    rng = np.random.default_rng(5)
    for _ in range(6):
        inputs = {("a", 0): int(rng.integers(2)), ("b", 0): int(rng.integers(2))}
        assert phys.tick(inputs).outputs == ref.tick(inputs).outputs
