"""Compiled force evaluation and RK4 time stepping."""

from __future__ import annotations

import math

import numba
import numpy as np


@numba.njit(cache=True)
def forces(x, xp, lam, k_l, gamma, a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1, ext, out):
    n = x.shape[0]
    for i in range(n):
        k = k_l + gamma * (a0[i] + a1[i] * xp)
        out[i] = -(lam * x[i] ** 3 + k * x[i] + bias[i]) + ext[i]
    for e in range(li.shape[0]):
        s = lc[e] * (ld0[e] + ld1[e] * xp)
        i = li[e]
        j = lj[e]
        out[i] += s * x[j]
        out[j] += s * x[i]
    for e in range(ni.shape[0]):
        s = nc[e] * (nd0[e] + nd1[e] * xp)
        i = ni[e]
        j = nj[e]
        out[i] += s * x[j] * x[j]
        out[j] += 2.0 * s * x[i] * x[j]


@numba.njit(cache=True)
def integrate(
    x, v, t, dt, nsteps, omega, frozen_xp,
    lam, k_l, gamma, m, b, limit,
    a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1,
    ext,
    probes, probe_every, probe_out,
    sample_offset, sample_every, sample_out,
    probe_phase,
):
    """Advance ``nsteps`` RK4 steps in place.

    Probe displacements are stored whenever the global step count is a
    multiple of ``probe_every`` (``probe_phase`` is that count modulo
    ``probe_every`` at entry); the full state every ``sample_every`` steps
    starting after ``sample_offset`` steps.  Returns ``(t, status)`` where
    status is -1 on success or the index of the step that left the
    ``limit`` box.
    """
    n = x.shape[0]
    f = np.empty(n)
    k1v = np.empty(n)
    k2v = np.empty(n)
    k3v = np.empty(n)
    k4v = np.empty(n)
    xs = np.empty(n)
    k1x = np.empty(n)
    k2x = np.empty(n)
    k3x = np.empty(n)
    pr = 0
    sr = 0
    inv_m = 1.0 / m
    for st in range(nsteps):
        if math.isnan(frozen_xp):
            xp1 = 1.0 + math.sin(omega * t)
            xp2 = 1.0 + math.sin(omega * (t + 0.5 * dt))
            xp4 = 1.0 + math.sin(omega * (t + dt))
        else:
            xp1 = frozen_xp
            xp2 = frozen_xp
            xp4 = frozen_xp
        forces(x, xp1, lam, k_l, gamma, a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1, ext, f)
        for i in range(n):
            k1x[i] = v[i]
            k1v[i] = (f[i] - b * v[i]) * inv_m
            xs[i] = x[i] + 0.5 * dt * k1x[i]
        for i in range(n):
            k2x[i] = v[i] + 0.5 * dt * k1v[i]
        forces(xs, xp2, lam, k_l, gamma, a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1, ext, f)
        for i in range(n):
            k2v[i] = (f[i] - b * k2x[i]) * inv_m
            xs[i] = x[i] + 0.5 * dt * k2x[i]
        for i in range(n):
            k3x[i] = v[i] + 0.5 * dt * k2v[i]
        forces(xs, xp2, lam, k_l, gamma, a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1, ext, f)
        for i in range(n):
            k3v[i] = (f[i] - b * k3x[i]) * inv_m
            xs[i] = x[i] + dt * k3x[i]
        forces(xs, xp4, lam, k_l, gamma, a0, a1, bias, li, lj, lc, ld0, ld1, ni, nj, nc, nd0, nd1, ext, f)
        bad = False
        for i in range(n):
            k4x = v[i] + dt * k3v[i]
            k4v = (f[i] - b * k4x) * inv_m
            x[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x)
            v[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v)
            if not (abs(x[i]) <= limit):
                bad = True
        t += dt
        if bad:
            return t, st
        done = st + 1
        if probe_every > 0 and (done + probe_phase) % probe_every == 0:
            for p in range(probes.shape[0]):
                probe_out[pr, p] = x[probes[p]]
            pr += 1
        if sample_every > 0 and done >= sample_offset and (done - sample_offset) % sample_every == 0:
            if sr < sample_out.shape[0]:
                for i in range(n):
                    sample_out[sr, i] = x[i]
                sr += 1
    return t, -1
