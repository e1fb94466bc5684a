"""Physical constants, the potential energy and its analytic forces.

The on-site energy of mass i is

    lam/4 x^4 + k_l/2 x^2 + gamma/2 x^2 (a0 + a1 x_p) + q_i x

and each coupling adds ``-c s x_i x_j`` (linear) or ``-c s x_i x_j**2``
(gate), with ``s = d0 + d1 x_p`` set by the coupling phase.  The functions
here are plain numpy and serve as the reference for the compiled kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from mdlc.techmap.network import CouplingKind, MassSpringNetwork


@dataclass(frozen=True)
class SimParams:
    lam: float = 1.0
    k_l: float = 1.5
    gamma: float = -2.0
    c: float = 0.5
    m: float = 0.05
    b: float = 0.25
    q: float = 1.0
    omega: float = 2.0 * math.pi
    steps_per_period: int = 400
    divergence_limit: float = 100.0

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError("mass must be positive")
        if self.b < 0:
            raise ValueError("damping must be non-negative")
        if self.steps_per_period < 2:
            raise ValueError("steps_per_period must be at least 2")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def dt(self) -> float:
        return self.period / self.steps_per_period

    @property
    def sample_step(self) -> int:
        """Steps from a cycle start to the readout phase (omega t = pi/2)."""
        return round(self.steps_per_period / 4)


def power_clock(t, omega: float = 2.0 * math.pi):
    return 1.0 + np.sin(omega * t)


@dataclass(frozen=True)
class NetworkArrays:
    """Flat arrays consumed by the numeric routines."""

    a0: np.ndarray
    a1: np.ndarray
    bias: np.ndarray  # q_i, already scaled by params.q
    li: np.ndarray
    lj: np.ndarray
    lc: np.ndarray
    ld0: np.ndarray
    ld1: np.ndarray
    ni: np.ndarray
    nj: np.ndarray
    nc: np.ndarray
    nd0: np.ndarray
    nd1: np.ndarray

    @property
    def n(self) -> int:
        return self.a0.shape[0]

    def kernel_args(self) -> tuple:
        return (self.a0, self.a1, self.bias, self.li, self.lj, self.lc, self.ld0, self.ld1,
                self.ni, self.nj, self.nc, self.nd0, self.nd1)


def network_arrays(network: MassSpringNetwork, params: SimParams = SimParams()) -> NetworkArrays:
    a = np.array([m.phase.coefficients for m in network.masses], dtype=float).reshape(-1, 2)
    bias = np.array([params.q * m.bias for m in network.masses], dtype=float)

    def pack(kinds):
        sel = [c for c in network.couplings if c.kind in kinds]
        i = np.array([c.i for c in sel], dtype=np.int64)
        j = np.array([c.j for c in sel], dtype=np.int64)
        sign = {CouplingKind.LINEAR_POS: 1.0, CouplingKind.LINEAR_NEG: -1.0, CouplingKind.NONLINEAR_GATE: -1.0}
        c = np.array([params.c * sign[x.kind] for x in sel], dtype=float)
        d = np.array([x.phase.coefficients for x in sel], dtype=float).reshape(-1, 2)
        return i, j, c, d[:, 0].copy(), d[:, 1].copy()

    lin = pack((CouplingKind.LINEAR_POS, CouplingKind.LINEAR_NEG))
    nl = pack((CouplingKind.NONLINEAR_GATE,))
    return NetworkArrays(a[:, 0].copy(), a[:, 1].copy(), bias, *lin, *nl)


def _arrays(model, params: SimParams) -> NetworkArrays:
    return model if isinstance(model, NetworkArrays) else network_arrays(model, params)


def potential(model, x, x_p: float, params: SimParams = SimParams()) -> float:
    """Total potential energy V(x; x_p)."""
    arr = _arrays(model, params)
    x = np.asarray(x, dtype=float)
    if x.shape != (arr.n,):
        raise ValueError(f"expected {arr.n} displacements, got shape {x.shape}")
    k = params.k_l + params.gamma * (arr.a0 + arr.a1 * x_p)
    v = np.sum(params.lam / 4 * x**4 + k / 2 * x**2 + arr.bias * x)
    s = arr.lc * (arr.ld0 + arr.ld1 * x_p)
    v -= np.sum(s * x[arr.li] * x[arr.lj])
    s = arr.nc * (arr.nd0 + arr.nd1 * x_p)
    v -= np.sum(s * x[arr.ni] * x[arr.nj] ** 2)
    return float(v)


def gradient(model, x, x_p: float, params: SimParams = SimParams()) -> np.ndarray:
    """Force vector, i.e. the negative gradient -dV/dx."""
    arr = _arrays(model, params)
    x = np.asarray(x, dtype=float)
    if x.shape != (arr.n,):
        raise ValueError(f"expected {arr.n} displacements, got shape {x.shape}")
    k = params.k_l + params.gamma * (arr.a0 + arr.a1 * x_p)
    f = -(params.lam * x**3 + k * x + arr.bias)
    s = arr.lc * (arr.ld0 + arr.ld1 * x_p)
    np.add.at(f, arr.li, s * x[arr.lj])
    np.add.at(f, arr.lj, s * x[arr.li])
    s = arr.nc * (arr.nd0 + arr.nd1 * x_p)
    np.add.at(f, arr.ni, s * x[arr.nj] ** 2)
    np.add.at(f, arr.nj, 2.0 * s * x[arr.ni] * x[arr.nj])
    return f


def kinetic_energy(v, params: SimParams = SimParams()) -> float:
    v = np.asarray(v, dtype=float)
    return float(0.5 * params.m * np.sum(v * v))
