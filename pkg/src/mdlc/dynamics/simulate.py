"""Time integration driver: force schedules, traces, readout and checkpoints."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from mdlc.dynamics import kernel
from mdlc.dynamics.model import NetworkArrays, SimParams, network_arrays
from mdlc.techmap.network import MassSpringNetwork

CHECKPOINT_FORMAT_VERSION = 1


class SimulationDiverged(RuntimeError):
    def __init__(self, t: float, mass: int, value: float):
        super().__init__(f"simulation diverged at t={t:.6g}: mass {mass} reached x={value:.6g}")
        self.t = t
        self.mass = mass
        self.value = value


@dataclass
class SimState:
    t: float
    x: np.ndarray
    v: np.ndarray

    def copy(self) -> SimState:
        return SimState(self.t, self.x.copy(), self.v.copy())

    def save(self, path) -> None:
        np.savez(path, format_version=CHECKPOINT_FORMAT_VERSION, t=self.t, x=self.x, v=self.v)

    @classmethod
    def load(cls, path) -> SimState:
        with np.load(path) as data:
            version = int(data["format_version"])
            if version != CHECKPOINT_FORMAT_VERSION:
                raise ValueError(f"unsupported checkpoint format_version {version}")
            return cls(float(data["t"]), data["x"].astype(float), data["v"].astype(float))


def initial_state(network: MassSpringNetwork) -> SimState:
    x = np.array([m.x0 for m in network.masses], dtype=float)
    v = np.array([m.v0 for m in network.masses], dtype=float)
    return SimState(0.0, x, v)


@dataclass
class ForceSchedule:
    """Piecewise-constant external forces: ``(mass, start, end, value)`` in time units."""

    entries: list[tuple[int, float, float, float]] = field(default_factory=list)

    def add(self, mass: int, start: float, end: float, value: float) -> ForceSchedule:
        if end < start:
            raise ValueError("force interval ends before it starts")
        for m, s, e, _ in self.entries:
            if m == mass and start < e and s < end:
                raise ValueError(f"overlapping force intervals on mass {mass}")
        self.entries.append((int(mass), float(start), float(end), float(value)))
        return self

    def breakpoints(self) -> list[float]:
        return sorted({t for _, s, e, _ in self.entries for t in (s, e)})

    def at(self, t: float, n: int) -> np.ndarray:
        ext = np.zeros(n)
        for m, s, e, val in self.entries:
            if s <= t < e:
                ext[m] += val
        return ext


@dataclass
class Trace:
    """Probe time series plus the readout-phase snapshot of every cycle."""

    probes: list[int]
    t: np.ndarray
    x_p: np.ndarray
    x: np.ndarray  # (len(t), len(probes))
    sample_t: np.ndarray
    samples: np.ndarray  # (cycles, masses) displacement at the readout phase
    final: SimState

    def logic(self, mass: int) -> np.ndarray:
        """Readout bits of ``mass``, one per completed cycle."""
        return (self.samples[:, mass] > 0).astype(int)

    def write_csv(self, path, labels: dict[int, str] | None = None) -> None:
        labels = labels or {}
        names = [labels.get(p, f"m{p}") for p in self.probes]
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "x_p"] + [f"x:{n}" for n in names] + [f"bit:{n}" for n in names])
            for k in range(len(self.t)):
                row = self.x[k]
                w.writerow(
                    [f"{self.t[k]:.6f}", f"{self.x_p[k]:.6f}"]
                    + [f"{v:.6f}" for v in row]
                    + [int(v > 0) for v in row]
                )


_EMPTY_I = np.zeros(0, dtype=np.int64)


class Simulator:
    """Reusable integrator bound to one network and parameter set."""

    def __init__(self, network: MassSpringNetwork | NetworkArrays, params: SimParams = SimParams()):
        self.params = params
        self.arrays = network if isinstance(network, NetworkArrays) else network_arrays(network, params)
        self.n = self.arrays.n

    def _global_step(self, t: float) -> int:
        return round(t / self.params.dt)

    def advance(
        self,
        state: SimState,
        nsteps: int,
        ext: np.ndarray | None = None,
        probes: np.ndarray = _EMPTY_I,
        probe_every: int = 0,
        sample: bool = True,
        frozen_xp: float | None = None,
        dt: float | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Advance ``state`` in place; returns (probe rows, readout snapshots)."""
        p = self.params
        dt = p.dt if dt is None else dt
        ext = np.zeros(self.n) if ext is None else np.asarray(ext, dtype=float)
        probes = np.asarray(probes, dtype=np.int64)
        g0 = self._global_step(state.t) if dt > 0 else 0
        S = p.steps_per_period
        s4 = p.sample_step
        if sample and dt > 0:
            first = g0 + 1 + ((s4 - (g0 + 1)) % S)
            offset = first - g0
            nsamp = 0 if offset > nsteps else 1 + (nsteps - offset) // S
            every = S
        else:
            offset, nsamp, every = 0, 0, 0
        if probe_every > 0:
            pfirst = probe_every - (g0 % probe_every)
            nprobe = 0 if pfirst > nsteps else 1 + (nsteps - pfirst) // probe_every
        else:
            nprobe = 0
        probe_out = np.zeros((nprobe, probes.shape[0]))
        sample_out = np.zeros((nsamp, self.n))
        t_end, status = kernel.integrate(
            state.x, state.v, state.t, dt, nsteps, p.omega,
            math.nan if frozen_xp is None else float(frozen_xp),
            p.lam, p.k_l, p.gamma, p.m, p.b, p.divergence_limit,
            *self.arrays.kernel_args(),
            ext,
            probes, probe_every, probe_out,
            offset, every, sample_out,
            g0 % probe_every if probe_every > 0 else 0,
        )
        state.t = t_end
        if status >= 0:
            bad = int(np.nanargmax(np.where(np.isfinite(state.x), np.abs(state.x), np.inf)))
            raise SimulationDiverged(t_end, bad, float(state.x[bad]))
        return probe_out, sample_out

    def run_cycles(self, state: SimState, cycles: int, ext: np.ndarray | None = None) -> np.ndarray:
        """Advance whole power-clock cycles under constant forces; returns readout snapshots."""
        _, samples = self.advance(state, cycles * self.params.steps_per_period, ext)
        return samples


def rk4_step(
    network: MassSpringNetwork | NetworkArrays,
    state: SimState,
    dt: float,
    params: SimParams = SimParams(),
    ext: np.ndarray | None = None,
    frozen_xp: float | None = None,
) -> SimState:
    """One classical RK4 step; returns a new state."""
    out = state.copy()
    Simulator(network, params).advance(out, 1, ext, sample=False, frozen_xp=frozen_xp, dt=dt)
    return out


def simulate(
    network: MassSpringNetwork,
    periods: float,
    schedule: ForceSchedule | None = None,
    probes=(),
    params: SimParams = SimParams(),
    state: SimState | None = None,
    record_every: int = 1,
    frozen_xp: float | None = None,
) -> Trace:
    sim = Simulator(network, params)
    state = initial_state(network) if state is None else state.copy()
    probes = np.asarray(list(probes), dtype=np.int64)
    if probes.size and (probes.min() < 0 or probes.max() >= sim.n):
        raise ValueError("probe index out of range")
    dt = params.dt
    g_start = sim._global_step(state.t)
    g_end = g_start + round(periods * params.steps_per_period)
    cuts = {g_start, g_end}
    if schedule is not None:
        cuts |= {round(t / dt) for t in schedule.breakpoints()}
    cuts = sorted(c for c in cuts if g_start <= c <= g_end)
    rows, samples, times, sample_t = [], [], [], []
    for a, b in zip(cuts, cuts[1:]):
        ext = schedule.at((a + 0.5) * dt, sim.n) if schedule is not None else None
        r, s = sim.advance(state, b - a, ext, probes, record_every, frozen_xp=frozen_xp)
        rows.append(r)
        samples.append(s)
        gs = np.arange(a + 1, b + 1)
        times.append(gs[gs % record_every == 0] * dt)
        S = params.steps_per_period
        sample_t.append(gs[(gs - params.sample_step) % S == 0] * dt)
    t = np.concatenate(times) if times else np.zeros(0)
    x_p = np.full_like(t, frozen_xp) if frozen_xp is not None else 1.0 + np.sin(params.omega * t)
    return Trace(
        probes=[int(p) for p in probes],
        t=t,
        x_p=x_p,
        x=np.concatenate(rows) if rows else np.zeros((0, probes.size)),
        sample_t=np.concatenate(sample_t) if sample_t else np.zeros(0),
        samples=np.concatenate(samples) if samples else np.zeros((0, sim.n)),
        final=state,
    )
