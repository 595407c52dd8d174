"""numba-compiled kernels; signatures mirror ``_numpy.py``."""

import numpy as np
from numba import njit

from ._numpy import PADE13, THETA13


@njit(cache=True)
def power_series_grid(theta, scale):
    n = theta.shape[0]
    m1 = scale.shape[0]
    out = np.empty((m1, n, n), dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for m in range(m1):
        for r in range(n):
            for c in range(n):
                out[m, r, c] = power[r, c] * scale[m]
        if m + 1 < m1:
            power = np.dot(theta, power)
    return out


@njit(cache=True)
def accumulate_projectors(grids, weights, out):
    k, m1, n, _ = grids.shape
    d = n * m1
    chunk = 256
    for start in range(0, k, chunk):
        stop = min(start + chunk, k)
        # columns are sqrt(w) v_kj, so one product gives the weighted sum
        v = np.empty((d, (stop - start) * n), dtype=np.complex128)
        for idx in range(start, stop):
            s = np.sqrt(weights[idx])
            base = (idx - start) * n
            for jp in range(n):
                for m in range(m1):
                    for j in range(n):
                        v[jp * m1 + m, base + j] = s * grids[idx, m, jp, j]
        out += np.dot(v, np.ascontiguousarray(v.conj().T))
    return out


@njit(cache=True)
def expm_pade13(a):
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    norm1 = 0.0
    for c in range(n):
        col = 0.0
        for r in range(n):
            col += abs(a[r, c])
        if col > norm1:
            norm1 = col
    s = 0
    if norm1 > THETA13:
        s = int(np.ceil(np.log2(norm1 / THETA13)))
    a = a / (2.0 ** s)
    b = PADE13
    a2 = np.dot(a, a)
    a4 = np.dot(a2, a2)
    a6 = np.dot(a4, a2)
    u = np.dot(a, np.dot(a6, b[13] * a6 + b[11] * a4 + b[9] * a2)
               + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (np.dot(a6, b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    r = np.ascontiguousarray(np.linalg.solve(v - u, v + u))
    for _ in range(s):
        r = np.dot(r, r)
    return r
