"""Vector coherent states on C^n (x) H_M.

A state is stored as a coefficient grid ``coeffs[j', m]`` (component ``j'``
of C^n, Fock level ``m``). Flattening is component-major, so
``state.vector()[j' * (M+1) + m] == coeffs[j', m]``, matching
``np.kron(matrix_on_Cn, matrix_on_fock)``.

The seed index ``j`` is 1-based throughout, as in ``chi^1 ... chi^n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import kernels
from .clifford_core import (
    Algebra,
    AlgebraElement,
    RepMatrix,
    apply_phase,
    link_metric,
    oct_left_matrix,
    oct_right_matrix,
    quat_to_matrix,
    scalar_matrix,
)
from .errors import AlgebraTagError, LabelSetError
from .fock_ops import displacement, quadrature_pair
from .rho_moments import RhoSequence, canonical_rho, full_normalization


class StateFamily(enum.Enum):
    SERIES = "series"
    EIGEN_SERIES = "eigen"
    MATRIX_MOMENT = "matrix-moment"
    EXPONENTIAL = "exponential"


class RepFamily(enum.Enum):
    SCALAR = "scalar"
    QUATERNION = "quaternion"
    OCTONION_LEFT = "octonion-left"
    OCTONION_RIGHT = "octonion-right"

    @property
    def n(self) -> int:
        return {"scalar": 1, "quaternion": 4}.get(self.value, 8)


def representation(family: RepFamily, coeffs, theta: float = 0.0) -> RepMatrix:
    """``e^{i theta} Theta(x)`` for the given family and coefficients."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=np.float64))
    if family is RepFamily.SCALAR:
        if coeffs.shape != (1,):
            raise AlgebraTagError(f"scalar family needs 1 coefficient, got {coeffs.shape[0]}")
        m = scalar_matrix(float(coeffs[0]))
    elif family is RepFamily.QUATERNION:
        m = quat_to_matrix(AlgebraElement(Algebra.QUATERNION, coeffs))
    elif family is RepFamily.OCTONION_LEFT:
        m = oct_left_matrix(AlgebraElement(Algebra.OCTONION, coeffs))
    else:
        m = oct_right_matrix(AlgebraElement(Algebra.OCTONION, coeffs))
    return apply_phase(m, theta)


@dataclass(frozen=True)
class VcsState:
    coeffs: np.ndarray
    t: float
    theta: float = 0.0
    j: int | None = None
    family: StateFamily = StateFamily.SERIES
    normalized: bool = False

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        if c.ndim != 2:
            raise ValueError("coefficient grid must be 2-d (component, level)")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def M(self) -> int:
        return self.coeffs.shape[1] - 1

    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def norm_squared(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def inner(self, other: "VcsState") -> complex:
        """``<self|other>``, antilinear in ``self``."""
        return complex(np.vdot(self.coeffs, other.coeffs))

    def renormalized(self) -> "VcsState":
        nrm = math.sqrt(self.norm_squared())
        if nrm == 0.0:
            raise ValueError("cannot renormalize a zero state")
        return replace(self, coeffs=self.coeffs / nrm, normalized=True)

    def distance(self, other: "VcsState") -> float:
        """Max absolute coefficient difference."""
        return float(np.abs(self.coeffs - other.coeffs).max())


def _check_j(j: int, n: int):
    if not 1 <= j <= n:
        raise IndexError(f"j must lie in 1..{n}, got {j}")


def _label(theta_z: RepMatrix, rho: RhoSequence) -> float:
    t = theta_z.scale_norm()
    if not t < rho.L:
        raise LabelSetError(f"||x|| = {t} lies outside the label set 0 <= t < {rho.L}")
    return t


def series_grid(theta_z: RepMatrix, rho: RhoSequence, M: int) -> np.ndarray:
    """Unnormalized ``Theta_z^m / sqrt(rho(m))`` for ``m = 0..M``, shape ``(M+1, n, n)``."""
    return kernels.power_series_grid(theta_z.entries, rho.extended(M).inv_sqrt(M))


def build_series_vcs(theta_z: RepMatrix, rho: RhoSequence, j: int, M: int,
                     normalization: float | None = None) -> VcsState:
    """``N(t)^{-1/2} sum_m Theta_z^m chi^j / sqrt(rho(m)) (x) phi_m``, truncated at ``M``.

    ``normalization`` defaults to the full ``N(t)`` (``n e^{t^2}`` for
    ``rho(m) = m!``), so each state has squared norm ``1/n`` up to the
    truncated tail.
    """
    n = theta_z.dim
    _check_j(j, n)
    t = _label(theta_z, rho)
    if normalization is None:
        normalization = full_normalization(rho, n, t)
    grid = series_grid(theta_z, rho, M)
    coeffs = grid[:, :, j - 1].T / math.sqrt(normalization)
    return VcsState(coeffs, t, theta_z.phase, j, StateFamily.SERIES)


def build_quaternion_vcs(q: AlgebraElement, theta: float, j: int, M: int) -> VcsState:
    """``1/2 e^{-|q|^2/2} sum_m q^m / sqrt(m!) chi^j (x) phi_m``."""
    if q.algebra is not Algebra.QUATERNION:
        raise AlgebraTagError("build_quaternion_vcs needs a quaternion")
    return build_series_vcs(apply_phase(quat_to_matrix(q), theta), canonical_rho(M), j, M)


def build_octonion_vcs(a: AlgebraElement, theta: float, side: str, j: int, M: int) -> VcsState:
    """Left (``omega``) or right (``nu``) octonionic VCS with prefactor ``e^{-|a|^2/2}/sqrt 8``."""
    if a.algebra is not Algebra.OCTONION:
        raise AlgebraTagError("build_octonion_vcs needs an octonion")
    side = side.lower()
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    rep = oct_left_matrix(a) if side == "left" else oct_right_matrix(a)
    return build_series_vcs(apply_phase(rep, theta), canonical_rho(M), j, M)


def right_from_left(left_of_conjugate: VcsState, metric: RepMatrix | None = None) -> VcsState:
    """Map ``|omega(conj a, z), j>`` to ``|nu(a, z), j>``.

    From ``nu(a) = K omega(conj a) K`` the right state is
    ``K_jj (K (x) I) |omega(conj a, z), j>``.
    """
    k = (metric or link_metric()).entries.real
    s = left_of_conjugate
    if s.j is None:
        raise ValueError("state has no seed index")
    coeffs = k[s.j - 1, s.j - 1] * (k @ s.coeffs)
    return replace(s, coeffs=coeffs)


@dataclass(frozen=True)
class EigenBlock:
    eigenvalue: complex
    vectors: np.ndarray
    degenerate: bool = False

    @property
    def multiplicity(self) -> int:
        return self.vectors.shape[1]


def eigen_split(m: RepMatrix, algebra: Algebra | None = None) -> list[EigenBlock]:
    """Split ``e^{i theta} Theta(x)`` into its two eigenspaces.

    The eigenvalues are ``e^{i theta}(a0 +- i b)`` with ``b`` the norm of the
    imaginary part, each with multiplicity ``n/2``. Eigenvectors come from
    ``eigh`` of the Hermitian matrix ``-i (Theta - a0 I)`` and are checked
    against the closed-form eigenvalues. A real element (``b = 0``) returns
    a single flagged block.
    """
    n = m.dim
    if algebra is not None and algebra.dim != n:
        raise AlgebraTagError(f"{algebra.name.lower()} matrices are {algebra.dim}x{algebra.dim}, got {n}")
    real = m.real_part
    a0 = float(np.trace(real)) / n
    skew = real - a0 * np.eye(n)
    if m.source is not None:
        b = m.source.imag_norm
    else:
        b = float(np.linalg.norm(skew[:, 0]))
    z = np.exp(1j * m.phase)
    scale = max(1.0, abs(a0), b)
    if b <= 1e-14 * scale:
        return [EigenBlock(complex(z * a0), np.eye(n, dtype=np.complex128), True)]
    lam, vecs = np.linalg.eigh(-1j * skew)
    upper = lam > 0
    blocks = []
    for sign, mask in ((1.0, upper), (-1.0, ~upper)):
        if mask.sum() != n // 2:
            raise ValueError("matrix does not have the two-eigenvalue Clifford structure")
        numeric = z * (a0 + 1j * lam[mask])
        closed = z * (a0 + 1j * sign * b)
        if np.abs(numeric - closed).max() > 1e-10 * scale:
            raise ValueError("numeric eigenvalues disagree with a0 +- i b")
        blocks.append(EigenBlock(complex(numeric.mean()), vecs[:, mask]))
    return blocks


def build_eigen_vcs(eigenvalue: complex, eigenvector: np.ndarray, rho: RhoSequence, M: int,
                    t: float | None = None) -> VcsState:
    """``N(t)^{-1/2} sum_m z^m / sqrt(rho(m)) chi (x) phi_m`` for an eigenvector ``chi``.

    ``t`` defaults to ``|z|`` (equal to ``||x||`` for Clifford matrices). The
    prefactor matches the matrix series, so the squared norm is ``1/n``.
    """
    chi = np.asarray(eigenvector, dtype=np.complex128).reshape(-1)
    if abs(np.linalg.norm(chi) - 1.0) > 1e-10:
        raise ValueError("eigenvector must have unit norm")
    n = chi.shape[0]
    t = abs(eigenvalue) if t is None else t
    if not t < rho.L:
        raise LabelSetError(f"|z| = {t} lies outside the label set 0 <= t < {rho.L}")
    scalar = kernels.power_series_grid(np.array([[eigenvalue]]), rho.extended(M).inv_sqrt(M))[:, 0, 0]
    coeffs = np.outer(chi, scalar) / math.sqrt(full_normalization(rho, n, t))
    return VcsState(coeffs, t, float(np.angle(eigenvalue)), None, StateFamily.EIGEN_SERIES)


def build_series_on_vector(theta_z: RepMatrix, rho: RhoSequence, vec: np.ndarray, M: int) -> VcsState:
    """Series state seeded by an arbitrary vector instead of a basis vector."""
    t = _label(theta_z, rho)
    grid = series_grid(theta_z, rho, M)
    coeffs = (grid @ np.asarray(vec, dtype=np.complex128)).T
    coeffs = coeffs / math.sqrt(full_normalization(rho, theta_z.dim, t))
    return VcsState(coeffs, t, theta_z.phase, None, StateFamily.SERIES)


@dataclass(frozen=True)
class UncertaintyReport:
    mean_Q: float
    mean_P: float
    delta_Q: float
    delta_P: float
    product: float
    saturated: bool
    edge_population: float = 0.0

    def as_dict(self) -> dict:
        return {
            "mean_Q": self.mean_Q, "mean_P": self.mean_P,
            "delta_Q": self.delta_Q, "delta_P": self.delta_P,
            "product": self.product, "saturated": self.saturated,
            "edge_population": self.edge_population,
        }


def uncertainty(state: VcsState, rho: RhoSequence, tol: float = 1e-8) -> UncertaintyReport:
    """``Delta Q * Delta P`` on the renormalized state.

    ``edge_population`` is the weight on the last Fock level; when it is not
    small the truncated ``a a^dagger`` distorts the variances.
    """
    psi = state.renormalized()
    vec = psi.vector()
    q_op, p_op = quadrature_pair(rho, state.M, state.n)
    q_vec = q_op.apply(vec)
    p_vec = p_op.apply(vec)
    mean_q = float(np.vdot(vec, q_vec).real)
    mean_p = float(np.vdot(vec, p_vec).real)
    dq = math.sqrt(max(np.vdot(q_vec, q_vec).real - mean_q ** 2, 0.0))
    dp = math.sqrt(max(np.vdot(p_vec, p_vec).real - mean_p ** 2, 0.0))
    product = dq * dp
    edge = float(np.sum(np.abs(psi.coeffs[:, -1]) ** 2))
    return UncertaintyReport(mean_q, mean_p, dq, dp, product, abs(product - 0.5) <= tol, edge)


def build_exponential_vcs(theta_z: RepMatrix, j: int, M: int) -> VcsState:
    """``n^{-1/2} exp(Theta_z (x) a^dagger - Theta_z^dagger (x) a) chi^j (x) phi_0``."""
    n = theta_z.dim
    _check_j(j, n)
    d = displacement(theta_z, canonical_rho(M), M)
    column = d.entries[:, (j - 1) * (M + 1)] / math.sqrt(n)
    return VcsState(column.reshape(n, M + 1), theta_z.scale_norm(), theta_z.phase, j,
                    StateFamily.EXPONENTIAL)


def rotation_block_R(x: float, m: int, n: int) -> np.ndarray:
    """``(1/sqrt m!) [[I cos x, -I sin x], [I sin x, I cos x]]`` with ``I = I_{n/2}``."""
    if n not in (4, 8):
        raise ValueError(f"rotation block is defined for n = 4 or 8, got {n}")
    if m < 0:
        raise ValueError("m must be >= 0")
    h = n // 2
    c, s = math.cos(x), math.sin(x)
    eye = np.eye(h)
    block = np.block([[c * eye, -s * eye], [s * eye, c * eye]])
    return math.exp(-0.5 * math.lgamma(m + 1)) * block.astype(np.complex128)


@dataclass(frozen=True)
class MatrixMomentSequence:
    """Matrix moments ``R(m)`` with ``R(m) R(m)^dagger = f(m) I_n``.

    ``closed_normalization(t)``, when given, returns ``n sum_m f(m) t^{2m}``
    in closed form; otherwise the series is summed numerically.
    """

    n: int
    generator: Callable[[int], np.ndarray]
    f: Callable[[int], float]
    closed_normalization: Callable[[float], float] | None = field(default=None, compare=False)
    label: str = ""

    def __call__(self, m: int) -> np.ndarray:
        return np.asarray(self.generator(m), dtype=np.complex128)

    def check(self, ms) -> float:
        """Max residual of ``R R^dagger = R^dagger R = f(m) I`` over ``ms``."""
        worst = 0.0
        eye = np.eye(self.n)
        for m in ms:
            r = self(m)
            target = self.f(m) * eye
            worst = max(worst, np.abs(r @ r.conj().T - target).max(),
                        np.abs(r.conj().T @ r - target).max())
        return float(worst)

    def normalization(self, t: float) -> float:
        if self.closed_normalization is not None:
            return float(self.closed_normalization(t))
        return series_normalization(self, t)


def rotation_moments(x: float, n: int) -> MatrixMomentSequence:
    """The rotation-block family ``R(m) = rotation_block_R(x, m, n)``, ``f(m) = 1/m!``."""
    return MatrixMomentSequence(
        n,
        lambda m: rotation_block_R(x, m, n),
        lambda m: math.exp(-math.lgamma(m + 1)),
        lambda t: n * math.exp(t * t),
        f"rotation(x={x!r})",
    )


def series_normalization(seq: MatrixMomentSequence, t: float, rtol: float = 1e-17,
                         m_cap: int = 5000) -> float:
    """``n sum_m f(m) t^{2m}`` summed until the terms stop contributing."""
    total = 0.0
    for m in range(m_cap + 1):
        term = seq.f(m) * t ** (2 * m) if t else (seq.f(0) if m == 0 else 0.0)
        total += term
        if m > t * t and term <= rtol * total:
            return seq.n * total
    raise ValueError(f"matrix-moment normalization did not converge within {m_cap} terms")


def build_matrix_moment_vcs(Z: RepMatrix, R: MatrixMomentSequence, j: int, M: int,
                            placement: str = "left", normalization: float | None = None) -> VcsState:
    """``N^{-1/2} sum_m R(m) Z^m chi^j (x) phi_m`` (or ``Z^m R(m)`` with ``placement='right'``)."""
    n = Z.dim
    if R.n != n:
        raise ValueError(f"R(m) is {R.n}x{R.n} but Z is {n}x{n}")
    _check_j(j, n)
    if placement not in ("left", "right"):
        raise ValueError("placement must be 'left' or 'right'")
    t = Z.scale_norm()
    if normalization is None:
        normalization = R.normalization(t)
    grid = matrix_moment_grid(Z, R, M, placement)
    coeffs = grid[:, :, j - 1].T / math.sqrt(normalization)
    return VcsState(coeffs, t, Z.phase, j, StateFamily.MATRIX_MOMENT)


def matrix_moment_grid(Z: RepMatrix, R: MatrixMomentSequence, M: int, placement: str = "left") -> np.ndarray:
    """Unnormalized ``R(m) Z^m`` (or ``Z^m R(m)``) stacked over ``m``."""
    powers = kernels.power_series_grid(Z.entries, np.ones(M + 1))
    rs = np.stack([R(m) for m in range(M + 1)])
    return rs @ powers if placement == "left" else powers @ rs
