"""Pure-numpy reference kernels.

Every function here has a numba twin in ``_numba.py`` with the same
signature; the two are cross-checked in the test suite.
"""

import numpy as np

# Pade(13) coefficients for scaling-and-squaring (Higham 2005).
PADE13 = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
])
THETA13 = 5.371920351148152


def power_series_grid(theta, scale):
    """Return ``out[m] = scale[m] * theta**m`` for ``m = 0..len(scale)-1``.

    Column ``j`` of ``out[m]`` is the level-``m`` component vector of the
    series state seeded by basis vector ``j``.
    """
    theta = np.ascontiguousarray(theta, dtype=np.complex128)
    n = theta.shape[0]
    out = np.empty((scale.shape[0], n, n), dtype=np.complex128)
    power = np.eye(n, dtype=np.complex128)
    for m in range(scale.shape[0]):
        out[m] = power * scale[m]
        if m + 1 < scale.shape[0]:
            power = theta @ power
    return out


def accumulate_projectors(grids, weights, out):
    """Add ``sum_k weights[k] * sum_j |v_kj><v_kj|`` into ``out`` in place.

    ``grids`` has shape ``(K, M+1, n, n)`` as produced by
    :func:`power_series_grid`; the vector ``v_kj`` is column ``j`` laid out
    component-major (index ``j' * (M+1) + m``).
    """
    k, m1, n, _ = grids.shape
    vecs = grids.transpose(0, 2, 1, 3).reshape(k, n * m1, n)
    for idx in range(k):
        v = vecs[idx]
        out += (weights[idx] * v) @ v.conj().T
    return out


def expm_pade13(a):
    """Matrix exponential by scaling-and-squaring with a fixed Pade(13) step."""
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    ident = np.eye(n, dtype=np.complex128)
    norm1 = np.abs(a).sum(axis=0).max() if n else 0.0
    s = 0
    if norm1 > THETA13:
        s = int(np.ceil(np.log2(norm1 / THETA13)))
    a = a / (2.0 ** s)
    b = PADE13
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    r = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r
