"""Generalized factorials, moment densities and radial quadrature.

A sequence ``rho(m) = x_m!`` fixes the series ``sum t^{2m} / x_m!`` and the
moment problem ``int_0^L lambda(t) t^{2m+1} dt = x_m!`` whose solution
``lambda`` weights the resolution of the identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import LabelSetError, QuadratureError


class RhoKind(enum.Enum):
    CANONICAL_FACTORIAL = "factorial"
    USER_TABLE = "table"


@dataclass(frozen=True)
class RhoSequence:
    kind: RhoKind
    values: np.ndarray
    R: float
    L: float

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if v.size == 0:
            raise ValueError("rho sequence needs at least rho(0)")
        if not np.all(v > 0) or not np.all(np.isfinite(v)):
            raise ValueError("rho(m) must be finite and positive for every m")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def m_max(self) -> int:
        return self.values.shape[0] - 1

    @property
    def is_canonical(self) -> bool:
        return self.kind is RhoKind.CANONICAL_FACTORIAL

    def x(self, m: int) -> float:
        """``x_m = rho(m) / rho(m-1)`` for ``m >= 1``; ``x_0 = 0``."""
        if m == 0:
            return 0.0
        if self.is_canonical:
            return float(m)
        if m > self.m_max:
            raise IndexError(f"x_{m} needs rho({m}); table stops at {self.m_max}")
        return float(self.values[m] / self.values[m - 1])

    def xs(self, upto: int) -> np.ndarray:
        return np.array([self.x(m) for m in range(upto + 1)])

    def factorial(self, m: int) -> float:
        """``x_m! = rho(m)``, with ``x_0! = 1``."""
        if m == 0:
            return 1.0
        if self.is_canonical:
            return float(math.factorial(m)) if m <= 170 else math.inf
        return float(self.values[m])

    def log_factorial(self, m: int) -> float:
        if self.is_canonical:
            return math.lgamma(m + 1)
        return 0.0 if m == 0 else math.log(self.values[m])

    def inv_sqrt(self, upto: int) -> np.ndarray:
        """``1 / sqrt(rho(m))`` for ``m = 0..upto``."""
        if upto > self.m_max and not self.is_canonical:
            raise IndexError(f"rho table stops at m = {self.m_max}, requested {upto}")
        return np.exp([-0.5 * self.log_factorial(m) for m in range(upto + 1)])

    def extended(self, upto: int) -> "RhoSequence":
        """Canonical sequences can grow on demand; tables cannot."""
        if upto <= self.m_max:
            return self
        if not self.is_canonical:
            raise IndexError(f"rho table stops at m = {self.m_max}, requested {upto}")
        return canonical_rho(upto)


def canonical_rho(m_max: int) -> RhoSequence:
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    values = [float(math.factorial(m)) if m <= 170 else math.inf for m in range(m_max + 1)]
    # values past 170! overflow; the canonical kind never reads them (log_factorial is exact)
    values = [v if np.isfinite(v) else np.finfo(float).max for v in values]
    return RhoSequence(RhoKind.CANONICAL_FACTORIAL, values, math.inf, math.inf)


def table_rho(values, R: float | None = None) -> RhoSequence:
    """A user-supplied table ``rho(0..M)``.

    ``R`` defaults to the last ratio ``x_M`` (or infinity when the table has
    a single entry); the label radius is ``L = sqrt(R)``.
    """
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if R is None:
        R = float(v[-1] / v[-2]) if v.size >= 2 else math.inf
    return RhoSequence(RhoKind.USER_TABLE, v, float(R), math.sqrt(R))


class DensityKind(enum.Enum):
    GAUSSIAN_TIMES_2 = "canonical"
    USER_DEFINED = "user"


@dataclass(frozen=True)
class DensityFunction:
    """A candidate solution ``lambda(t) >= 0`` on ``[0, L)``."""

    kind: DensityKind
    func: Callable[[np.ndarray], np.ndarray]
    support_upper: float = math.inf
    label: str = ""

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        out = np.where(t < self.support_upper, self.func(t), 0.0)
        return out

    def times_gaussian_inverse(self, t):
        """``lambda(t) * exp(t^2)``, the integrand left after Gauss-Laguerre weighting."""
        t = np.asarray(t, dtype=np.float64)
        if self.kind is DensityKind.GAUSSIAN_TIMES_2:
            return np.full_like(t, 2.0)
        return self(t) * np.exp(t * t)


def canonical_density() -> DensityFunction:
    """``lambda(t) = 2 exp(-t^2)``: its odd moments are exactly ``m!``."""
    return DensityFunction(DensityKind.GAUSSIAN_TIMES_2, lambda t: 2.0 * np.exp(-t * t),
                           math.inf, "2*exp(-t^2)")


def gaussian_density(scale: float = 1.0) -> DensityFunction:
    """``scale * exp(-t^2)``; ``scale = 1`` gives moments ``m!/2``."""
    return DensityFunction(DensityKind.USER_DEFINED, lambda t: scale * np.exp(-t * t),
                           math.inf, f"{scale!r}*exp(-t^2)")


def tabulated_density(ts, values, interpolation: str = "linear") -> DensityFunction:
    """Piecewise interpolated density on ``[t_0, t_last]``, zero beyond."""
    ts = np.asarray(ts, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if ts.ndim != 1 or ts.shape != values.shape or ts.size < 2:
        raise ValueError("density table needs matching 1-d arrays with at least two points")
    if np.any(np.diff(ts) <= 0):
        raise ValueError("density table abscissae must be strictly increasing")
    if np.any(values < 0):
        raise ValueError("density table has negative values")
    if interpolation == "linear":
        def func(t):
            return np.interp(t, ts, values, left=0.0, right=0.0)
    elif interpolation == "log-linear":
        if np.any(values <= 0):
            raise ValueError("log-linear interpolation needs strictly positive values")
        logs = np.log(values)

        def func(t):
            inside = (t >= ts[0]) & (t <= ts[-1])
            return np.where(inside, np.exp(np.interp(t, ts, logs)), 0.0)
    else:
        raise ValueError(f"unknown interpolation rule {interpolation!r}")
    return DensityFunction(DensityKind.USER_DEFINED, func, float(ts[-1]), "table")


class RadialRule(enum.Enum):
    GAUSS_LAGUERRE = "gauss-laguerre"
    GAUSS_LEGENDRE = "gauss-legendre"


@dataclass(frozen=True)
class QuadratureSpec:
    radial_rule: RadialRule = RadialRule.GAUSS_LAGUERRE
    radial_points: int = 64
    angular_points: int | None = None
    t_cutoff: float | None = None

    def __post_init__(self):
        if self.radial_points < 1:
            raise ValueError("radial_points must be >= 1")
        if self.angular_points is not None and self.angular_points < 1:
            raise ValueError("angular_points must be >= 1")
        if self.radial_rule is RadialRule.GAUSS_LEGENDRE:
            if self.t_cutoff is None or not self.t_cutoff > 0:
                raise ValueError("gauss-legendre radial rule needs t_cutoff > 0")

    def summary(self) -> dict:
        return {
            "radial_rule": self.radial_rule.value,
            "radial_points": self.radial_points,
            "angular_points": self.angular_points,
            "t_cutoff": self.t_cutoff,
        }


def radial_nodes(quad: QuadratureSpec, density: DensityFunction):
    """Nodes ``t_k`` and weights ``c_k`` with ``sum c_k F(t_k) ~ int_0^L lambda(t) F(t) t dt``.

    Gauss-Laguerre works in ``r = t^2``: ``int lambda(t) F(t) t dt =
    1/2 int e^{-r} [lambda(sqrt r) e^r] F(sqrt r) dr``.
    """
    if quad.radial_rule is RadialRule.GAUSS_LAGUERRE:
        if math.isfinite(density.support_upper):
            raise QuadratureError("gauss-laguerre needs a density supported on [0, inf)")
        r, w = np.polynomial.laguerre.laggauss(quad.radial_points)
        t = np.sqrt(r)
        lam = density.times_gaussian_inverse(t)
        if np.any(lam < 0):
            raise ValueError("density is negative at a quadrature node")
        return t, 0.5 * w * lam
    x, w = np.polynomial.legendre.leggauss(quad.radial_points)
    upper = min(quad.t_cutoff, density.support_upper)
    t = 0.5 * upper * (x + 1.0)
    lam = density(t)
    if np.any(lam < 0):
        raise ValueError("density is negative at a quadrature node")
    return t, 0.5 * upper * w * lam * t


@dataclass(frozen=True)
class MomentRow:
    m: int
    integral: float
    target: float
    relative_error: float
    converged: bool


def _moments(quad: QuadratureSpec, density: DensityFunction, m_max: int) -> np.ndarray:
    t, c = radial_nodes(quad, density)
    powers = np.power.outer(t * t, np.arange(m_max + 1))
    return c @ powers


def verify_moments(density: DensityFunction, rho: RhoSequence, m_max: int,
                   quad: QuadratureSpec | None = None, convergence_tol: float = 1e-8) -> list[MomentRow]:
    """Compare ``int_0^L lambda(t) t^{2m+1} dt`` against ``x_m!`` for ``m = 0..m_max``.

    Each integral is recomputed with a rule of twice the order; rows whose two
    estimates differ by more than ``convergence_tol`` (relative) are flagged
    ``converged=False``.
    """
    quad = quad or QuadratureSpec()
    if m_max < 0:
        raise ValueError("m_max must be >= 0")
    if m_max > rho.m_max:
        raise IndexError(f"m_max = {m_max} exceeds the rho table (m <= {rho.m_max})")
    coarse = _moments(quad, density, m_max)
    fine_quad = QuadratureSpec(quad.radial_rule, 2 * quad.radial_points,
                               quad.angular_points, quad.t_cutoff)
    fine = _moments(fine_quad, density, m_max)
    rows = []
    for m in range(m_max + 1):
        target = rho.factorial(m)
        integral = float(coarse[m])
        drift = abs(integral - fine[m]) / max(abs(fine[m]), np.finfo(float).tiny)
        rows.append(MomentRow(m, integral, target, abs(integral - target) / target,
                              bool(drift <= convergence_tol)))
    return rows


def normalization_factor(rho: RhoSequence, n: int, t: float, M: int) -> float:
    """Partial sum ``n * sum_{m<=M} t^{2m} / x_m!``."""
    if t < 0:
        raise LabelSetError("t must be >= 0")
    if not t < rho.L:
        raise LabelSetError(f"t = {t} lies outside the label set 0 <= t < {rho.L}")
    if M > rho.m_max and not rho.is_canonical:
        raise IndexError(f"M = {M} exceeds the rho table (m <= {rho.m_max})")
    if t == 0:
        return float(n)
    logs = np.array([2 * m * math.log(t) - rho.log_factorial(m) for m in range(M + 1)])
    return float(n * np.exp(logs).sum())


def full_normalization(rho: RhoSequence, n: int, t: float) -> float:
    """``N(t)`` summed to the end of the available sequence; closed form ``n e^{t^2}`` when canonical."""
    if t < 0 or not t < rho.L:
        raise LabelSetError(f"t = {t} lies outside the label set 0 <= t < {rho.L}")
    if rho.is_canonical:
        return float(n * math.exp(t * t))
    return normalization_factor(rho, n, t, rho.m_max)


def truncation_bound(rho: RhoSequence, t: float, M: int) -> float:
    """Upper bound ``t^{2(M+1)}/(M+1)! * e^{t^2}`` on ``sum_{m>M} t^{2m}/m!``.

    Follows from ``(M+1+k)! >= (M+1)! k!``.
    """
    if not rho.is_canonical:
        raise ValueError("truncation_bound is only available for rho(m) = m!")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 0.0
    return math.exp(2 * (M + 1) * math.log(t) - math.lgamma(M + 2) + t * t)


def select_truncation(rho: RhoSequence, t: float, tol: float = 1e-12, m_cap: int = 2000) -> int:
    """Smallest ``M`` whose tail bound relative to ``e^{t^2}`` is at most ``tol``."""
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if t == 0:
        return 0
    for M in range(m_cap + 1):
        if truncation_bound(rho, t, M) <= tol * math.exp(t * t):
            return M
    raise ValueError(f"no truncation below {m_cap} reaches tolerance {tol} at t = {t}")
