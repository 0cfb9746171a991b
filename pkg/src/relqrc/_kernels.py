"""Numba-compiled inner loops for the fixed-step RK4 integrators.

The propagator equation of motion has a sparse generator (the detector
couples to every field mode but the field modes do not couple directly),
so the matrix is applied through an explicit nonzero list instead of a
dense matmul.  Coefficient values at all RK4 stage times are precomputed
by the callers with vectorized numpy, so these loops only do arithmetic.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, fastmath=True)
def rk4_propagator(S, vals, ri, ci, h, nsteps):
    """Advance dS/dtau = A(tau) S in place over nsteps fixed RK4 steps.

    A(tau) is sparse with entries vals[s, e] at (ri[e], ci[e]); stage s runs
    over the 2*nsteps+1 edge/midpoint times of the interval.
    """
    M = S.shape[0]
    nnz = ri.shape[0]
    k1 = np.empty((M, M), np.complex128)
    k2 = np.empty((M, M), np.complex128)
    k3 = np.empty((M, M), np.complex128)
    k4 = np.empty((M, M), np.complex128)
    tmp = np.empty((M, M), np.complex128)
    for step in range(nsteps):
        v1 = vals[2 * step]
        v2 = vals[2 * step + 1]
        v4 = vals[2 * step + 2]
        k1[:] = 0.0
        for e in range(nnz):
            i = ri[e]
            j = ci[e]
            a = v1[e]
            for c in range(M):
                k1[i, c] += a * S[j, c]
        for i in range(M):
            for c in range(M):
                tmp[i, c] = S[i, c] + 0.5 * h * k1[i, c]
        k2[:] = 0.0
        for e in range(nnz):
            i = ri[e]
            j = ci[e]
            a = v2[e]
            for c in range(M):
                k2[i, c] += a * tmp[j, c]
        for i in range(M):
            for c in range(M):
                tmp[i, c] = S[i, c] + 0.5 * h * k2[i, c]
        k3[:] = 0.0
        for e in range(nnz):
            i = ri[e]
            j = ci[e]
            a = v2[e]
            for c in range(M):
                k3[i, c] += a * tmp[j, c]
        for i in range(M):
            for c in range(M):
                tmp[i, c] = S[i, c] + h * k3[i, c]
        k4[:] = 0.0
        for e in range(nnz):
            i = ri[e]
            j = ci[e]
            a = v4[e]
            for c in range(M):
                k4[i, c] += a * tmp[j, c]
        for i in range(M):
            for c in range(M):
                S[i, c] += (h / 6.0) * (k1[i, c] + 2.0 * (k2[i, c] + k3[i, c])
                                        + k4[i, c])


@njit(cache=True, fastmath=True)
def _dense_deriv(out, psi, w1, w2, sd, sf):
    """out = -i H psi with H = w1 D a + w2 D a^dag + h.c.

    psi has shape (d_levels, n_fock); D and a are lowering operators with
    matrix elements sd[l] = <l-1|D|l> and sf[n] = sqrt(n).
    """
    d = psi.shape[0]
    nf = psi.shape[1]
    w1c = np.conj(w1)
    w2c = np.conj(w2)
    for l in range(d):
        for n in range(nf):
            acc = 0.0 + 0.0j
            if l + 1 < d:
                if n + 1 < nf:
                    acc += w1 * sd[l + 1] * sf[n + 1] * psi[l + 1, n + 1]
                if n - 1 >= 0:
                    acc += w2 * sd[l + 1] * sf[n] * psi[l + 1, n - 1]
            if l - 1 >= 0:
                if n - 1 >= 0:
                    acc += w1c * sd[l] * sf[n] * psi[l - 1, n - 1]
                if n + 1 < nf:
                    acc += w2c * sd[l] * sf[n + 1] * psi[l - 1, n + 1]
            out[l, n] = -1j * acc


@njit(cache=True, fastmath=True)
def rk4_dense(psi, z1, z2, sd, sf, h, nsteps):
    """Advance d(psi)/dtau = -i H(tau) psi in place (same staging layout)."""
    d = psi.shape[0]
    nf = psi.shape[1]
    k1 = np.empty((d, nf), np.complex128)
    k2 = np.empty((d, nf), np.complex128)
    k3 = np.empty((d, nf), np.complex128)
    k4 = np.empty((d, nf), np.complex128)
    tmp = np.empty((d, nf), np.complex128)
    for step in range(nsteps):
        s1 = 2 * step
        s2 = 2 * step + 1
        s4 = 2 * step + 2
        _dense_deriv(k1, psi, z1[s1], z2[s1], sd, sf)
        for l in range(d):
            for n in range(nf):
                tmp[l, n] = psi[l, n] + 0.5 * h * k1[l, n]
        _dense_deriv(k2, tmp, z1[s2], z2[s2], sd, sf)
        for l in range(d):
            for n in range(nf):
                tmp[l, n] = psi[l, n] + 0.5 * h * k2[l, n]
        _dense_deriv(k3, tmp, z1[s2], z2[s2], sd, sf)
        for l in range(d):
            for n in range(nf):
                tmp[l, n] = psi[l, n] + h * k3[l, n]
        _dense_deriv(k4, tmp, z1[s4], z2[s4], sd, sf)
        for l in range(d):
            for n in range(nf):
                psi[l, n] += (h / 6.0) * (k1[l, n] + 2.0 * (k2[l, n]
                                          + k3[l, n]) + k4[l, n])
