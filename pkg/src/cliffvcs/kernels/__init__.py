"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly. Set the environment
variable ``CLIFFVCS_NUMBA=0`` before import to force the numpy path.
"""

import os

import numpy as np

from . import _numpy

_DISABLED = os.environ.get("CLIFFVCS_NUMBA", "1").strip().lower() in {"0", "false", "no", "off"}

_jit = None
if not _DISABLED:
    try:
        from . import _numba as _jit
    except ImportError:  # pragma: no cover - numba is optional
        _jit = None

BACKEND = "numba" if _jit is not None else "numpy"
_impl = _jit if _jit is not None else _numpy


def power_series_grid(theta, scale):
    theta = np.ascontiguousarray(theta, dtype=np.complex128)
    scale = np.ascontiguousarray(scale, dtype=np.float64)
    return _impl.power_series_grid(theta, scale)


def accumulate_projectors(grids, weights, out):
    grids = np.ascontiguousarray(grids, dtype=np.complex128)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if np.any(weights < 0):
        raise ValueError("projector weights must be non-negative")
    return _impl.accumulate_projectors(grids, weights, out)


def expm(a):
    return _impl.expm_pade13(np.ascontiguousarray(a, dtype=np.complex128))


def implementations():
    """Map backend name to kernel module, for cross-checking both paths."""
    impls = {"numpy": _numpy}
    if _jit is not None:
        impls["numba"] = _jit
    return impls
