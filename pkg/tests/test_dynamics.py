import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdlc.dynamics import (
    CHECKPOINT_FORMAT_VERSION,
    ForceSchedule,
    SimParams,
    SimState,
    SimulationDiverged,
    Simulator,
    gradient,
    initial_state,
    kinetic_energy,
    network_arrays,
    potential,
    power_clock,
    rk4_step,
    simulate,
)
from mdlc.dynamics import kernel
from mdlc.techmap import CouplingKind, MassSpringNetwork, Phase, cell_nor, generate_clock

P = SimParams()
COEF = {Phase.IN: (0.0, 1.0), Phase.OUT: (2.0, -1.0)}
SIGN = {CouplingKind.LINEAR_POS: 0.5, CouplingKind.LINEAR_NEG: -0.5, CouplingKind.NONLINEAR_GATE: -0.5}


def random_network(rng, n=None):
    n = n or int(rng.integers(2, 12))
    net = MassSpringNetwork()
    for _ in range(n):
        net.add_mass(Phase.IN if rng.random() < 0.5 else Phase.OUT, bias=float(rng.choice([-1, 0, 1])))
    for _ in range(int(rng.integers(1, 2 * n))):
        i, j = (int(v) for v in rng.choice(n, 2, replace=False))
        kind = list(CouplingKind)[int(rng.integers(3))]
        net.couple(i, j, kind, net.masses[i].phase)
    return net


def oracle_potential(net, x, xp, p=P):
    """Term-by-term energy written straight from the model definition."""
    v = 0.0
    for m, xi in zip(net.masses, x):
        a0, a1 = COEF[m.phase]
        v += p.lam / 4 * xi**4 + p.k_l / 2 * xi**2 + p.gamma / 2 * xi**2 * (a0 + a1 * xp) + p.q * m.bias * xi
    for c in net.couplings:
        d0, d1 = COEF[c.phase]
        s = d0 + d1 * xp
        if c.kind is CouplingKind.NONLINEAR_GATE:
            v -= SIGN[c.kind] * s * x[c.i] * x[c.j] ** 2
        else:
            v -= SIGN[c.kind] * s * x[c.i] * x[c.j]
    return v


def central_difference(net, x, xp, h=1e-6):
    g = np.zeros_like(x)
    for k in range(len(x)):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = -(potential(net, x + e, xp) - potential(net, x - e, xp)) / (2 * h)
    return g


def fd_relative_error(net, x, xp):
    g = gradient(net, x, xp)
    fd = central_difference(net, x, xp)
    return np.linalg.norm(g - fd) / max(np.linalg.norm(g), 1e-12)


def test_power_clock():
    assert power_clock(0.0) == pytest.approx(1.0)
    assert power_clock(0.25) == pytest.approx(2.0)
    assert power_clock(0.75) == pytest.approx(0.0)


def test_params_defaults():
    assert (P.lam, P.k_l, P.gamma, P.c, P.m, P.b, P.q) == (1.0, 1.5, -2.0, 0.5, 0.05, 0.25, 1.0)
    assert P.steps_per_period == 400 and P.sample_step == 100
    assert P.dt == pytest.approx(1 / 400)


def test_potential_matches_oracle():
    rng = np.random.default_rng(0)
    for _ in range(50):
        net = random_network(rng)
        x = rng.normal(0, 1.5, net.num_masses)
        xp = float(rng.uniform(0, 2))
        assert potential(net, x, xp) == pytest.approx(oracle_potential(net, x, xp), rel=1e-12, abs=1e-12)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        net = random_network(rng)
        x = rng.normal(0, 1.5, net.num_masses)
        worst = max(worst, fd_relative_error(net, x, float(rng.uniform(0, 2))))
    assert worst < 1e-6


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), xp=st.floats(0, 2))
def test_gradient_property(seed, xp):
    rng = np.random.default_rng(seed)
    net = random_network(rng)
    assert fd_relative_error(net, rng.normal(0, 1.5, net.num_masses), xp) < 1e-6


def test_compiled_kernel_matches_numpy(maze_net):
    rng = np.random.default_rng(2)
    arr = network_arrays(maze_net)
    for _ in range(5):
        x = rng.normal(0, 1.5, arr.n)
        xp = float(rng.uniform(0, 2))
        ext = rng.normal(0, 1, arr.n)
        out = np.zeros(arr.n)
        kernel.forces(x, xp, P.lam, P.k_l, P.gamma, *arr.kernel_args(), ext, out)
        np.testing.assert_allclose(out, gradient(maze_net, x, xp) + ext, rtol=1e-12, atol=1e-12)


def test_gate_coupling_is_directional_in_energy():
    net = MassSpringNetwork()
    a, b = net.add_mass(Phase.IN), net.add_mass(Phase.OUT)
    net.couple(a, b, CouplingKind.NONLINEAR_GATE, Phase.IN)
    x = np.array([0.7, -1.3])
    base = potential(net, x, 1.0) - oracle_potential(MassSpringNetwork(net.masses, []), x, 1.0)
    assert base == pytest.approx(0.5 * 1.0 * 0.7 * 1.3**2)


def single_mass(phase=Phase.IN, x0=0.0):
    net = MassSpringNetwork()
    net.add_mass(phase, x0=x0)
    return net


def test_damped_oscillator_closed_form():
    params = SimParams(lam=0.0, gamma=0.0, q=0.0)
    net = single_mass(x0=1.0)
    tr = simulate(net, 10, probes=[0], params=params)
    beta = params.b / (2 * params.m)
    wd = math.sqrt(params.k_l / params.m - beta**2)
    exact = np.exp(-beta * tr.t) * (np.cos(wd * tr.t) + beta / wd * np.sin(wd * tr.t))
    envelope = np.exp(-beta * tr.t) * math.sqrt(1 + (beta / wd) ** 2)
    assert np.all(np.abs(tr.x[:, 0] - exact) <= 0.01 * envelope + 1e-15)


def test_zero_step_is_identity():
    net = random_network(np.random.default_rng(3), 6)
    s = initial_state(net)
    s.x[:] = np.linspace(-1, 1, 6)
    s.v[:] = 0.3
    out = rk4_step(net, s, 0.0)
    np.testing.assert_array_equal(out.x, s.x)
    np.testing.assert_array_equal(out.v, s.v)
    assert out.t == s.t


@pytest.mark.parametrize("xp", [0.0, 0.8, 2.0])
def test_frozen_clock_dissipation(maze_net, xp):
    rng = np.random.default_rng(4)
    arr = network_arrays(maze_net)
    s = initial_state(maze_net)
    s.x[:] = rng.normal(0, 1.2, arr.n)
    s.v[:] = rng.normal(0, 1.0, arr.n)
    sim = Simulator(arr)
    energy = [kinetic_energy(s.v) + potential(arr, s.x, xp)]
    for _ in range(400):
        sim.advance(s, 1, sample=False, frozen_xp=xp)
        energy.append(kinetic_energy(s.v) + potential(arr, s.x, xp))
    e = np.array(energy)
    assert np.all(np.diff(e) <= 1e-8 * np.abs(e[:-1]) + 1e-12)
    assert e[-1] < e[0]


def halving_states(net, base, periods=1.0):
    out = []
    for steps in (base, 2 * base, 4 * base):
        s = initial_state(net)
        Simulator(net, SimParams(steps_per_period=steps)).advance(s, int(periods * steps), sample=False)
        out.append(s.x)
    return out


def smooth_net():
    net = MassSpringNetwork()
    a, b = net.add_mass(Phase.IN, x0=0.3), net.add_mass(Phase.IN, x0=-0.7)
    cell_nor(net, a, b)
    generate_clock(net, 4)
    return net


@pytest.mark.parametrize("base", [50, 100, 200])
def test_step_halving_ratio(base):
    x1, x2, x4 = halving_states(smooth_net(), base)
    ratio = np.max(np.abs(x1 - x2)) / np.max(np.abs(x2 - x4))
    assert 8 <= ratio <= 32


def test_default_step_is_converged():
    x1, x2, _ = halving_states(smooth_net(), 400, periods=3)
    assert np.max(np.abs(x1 - x2)) < 1e-5


def test_overdamped_settling_reaches_well():
    tr = simulate(single_mass(x0=0.1), 5, probes=[0], frozen_xp=2.0)
    assert abs(tr.x[-1, 0] - math.sqrt(2.5)) < 1e-3


@pytest.mark.xfail(strict=True, reason="the default parameters give an underdamped well, overshoot is about 16%")
def test_overdamped_no_overshoot():
    tr = simulate(single_mass(x0=0.1), 5, probes=[0], frozen_xp=2.0)
    assert tr.x[:, 0].max() <= 1.01 * math.sqrt(2.5)


def test_logic_readout_at_sampling_phase():
    tr = simulate(single_mass(), 3, ForceSchedule().add(0, 0, 3, 1.0))
    np.testing.assert_allclose(tr.sample_t, [0.25, 1.25, 2.25])
    assert list(tr.logic(0)) == [1, 1, 1]


def test_repeatable(maze_net):
    a = simulate(maze_net, 3, probes=[0, 5])
    b = simulate(maze_net, 3, probes=[0, 5])
    np.testing.assert_array_equal(a.samples, b.samples)
    np.testing.assert_array_equal(a.x, b.x)


def test_restartable_in_pieces(lock_net):
    whole = simulate(lock_net, 4)
    first = simulate(lock_net, 1.5)
    rest = simulate(lock_net, 2.5, state=first.final)
    np.testing.assert_array_equal(rest.final.x, whole.final.x)
    np.testing.assert_array_equal(np.vstack([first.samples, rest.samples]), whole.samples)


def test_schedule_forces_and_overlap():
    sched = ForceSchedule().add(0, 0.0, 1.0, 1.0).add(0, 1.0, 2.0, -1.0)
    assert sched.at(0.5, 1)[0] == 1.0 and sched.at(1.5, 1)[0] == -1.0 and sched.at(2.5, 1)[0] == 0.0
    with pytest.raises(ValueError, match="overlapping"):
        sched.add(0, 0.5, 1.5, 1.0)
    with pytest.raises(ValueError):
        ForceSchedule().add(0, 2.0, 1.0, 1.0)


def test_forced_mass_follows_force():
    net = single_mass()
    for f, bit in ((1.0, 1), (-1.0, 0)):
        tr = simulate(net, 3, ForceSchedule().add(0, 0, 3, f))
        assert tr.logic(0)[-1] == bit


def test_divergence_reported():
    net = single_mass()
    with pytest.raises(SimulationDiverged) as info:
        simulate(net, 2, ForceSchedule().add(0, 0.5, 2, 1e9))
    assert info.value.mass == 0
    assert 0.5 <= info.value.t <= 2.0


def test_checkpoint_round_trip(tmp_path, lock_net):
    tr = simulate(lock_net, 1.3)
    path = tmp_path / "state.npz"
    tr.final.save(path)
    back = SimState.load(path)
    assert back.t == tr.final.t
    np.testing.assert_array_equal(back.x, tr.final.x)
    np.testing.assert_array_equal(back.v, tr.final.v)


def test_checkpoint_version(tmp_path):
    path = tmp_path / "bad.npz"
    np.savez(path, format_version=CHECKPOINT_FORMAT_VERSION + 1, t=0.0, x=np.zeros(1), v=np.zeros(1))
    with pytest.raises(ValueError, match="format_version"):
        SimState.load(path)


def test_trace_csv(tmp_path):
    net = single_mass(x0=1.0)
    tr = simulate(net, 1, probes=[0], record_every=100)
    path = tmp_path / "trace.csv"
    tr.write_csv(path, {0: "a"})
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x_p,x:a,bit:a"
    assert len(lines) == 1 + 4


def test_probe_range_checked():
    with pytest.raises(ValueError, match="probe"):
        simulate(single_mass(), 1, probes=[3])


def test_bad_params():
    with pytest.raises(ValueError):
        SimParams(m=0.0)
    with pytest.raises(ValueError):
        SimParams(steps_per_period=1)
