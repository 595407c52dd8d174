"""Real matrix representations of quaternions and octonions.

Basis order is ``(1, i, j, k)`` for quaternions and ``(1, e1, ..., e7)`` for
octonions. Matrices are laid out row by row exactly as the standard tables
print them; the left representation acts on coefficient columns as
``omega(a) @ vec(b) == vec(a * b)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import AlgebraTagError


class Algebra(enum.Enum):
    QUATERNION = 4
    OCTONION = 8

    @property
    def dim(self) -> int:
        return self.value


@dataclass(frozen=True)
class AlgebraElement:
    algebra: Algebra
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        if c.shape[0] != self.algebra.dim:
            raise AlgebraTagError(
                f"{self.algebra.name.lower()} needs {self.algebra.dim} coefficients, got {c.shape[0]}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def quaternion(cls, *coeffs) -> "AlgebraElement":
        return cls(Algebra.QUATERNION, _flatten(coeffs))

    @classmethod
    def octonion(cls, *coeffs) -> "AlgebraElement":
        return cls(Algebra.OCTONION, _flatten(coeffs))

    @classmethod
    def unit(cls, algebra: Algebra, index: int) -> "AlgebraElement":
        c = np.zeros(algebra.dim)
        c[index] = 1.0
        return cls(algebra, c)

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.coeffs, self.coeffs)))

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    @property
    def imag_norm(self) -> float:
        """``b = sqrt(a1^2 + ... )``, the norm of the imaginary part."""
        return float(np.linalg.norm(self.coeffs[1:]))

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.algebra, self.coeffs.tobytes()))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return cd_multiply(self, other)
        return NotImplemented


def _flatten(coeffs):
    if len(coeffs) == 1 and np.ndim(coeffs[0]) == 1:
        return coeffs[0]
    return coeffs


@dataclass(frozen=True)
class RepMatrix:
    """Dense complex ``n x n`` matrix carrying ``e^{i phase} * Theta(x)``."""

    entries: np.ndarray
    phase: float = 0.0
    source: AlgebraElement | None = field(default=None, compare=False)

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError(f"representation matrix must be square, got shape {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def real_part(self) -> np.ndarray:
        """The underlying real matrix ``Theta(x) = e^{-i phase} * entries``."""
        return (np.exp(-1j * self.phase) * self.entries).real

    def scale_norm(self) -> float:
        """``||x||``, from the source element or from ``M M^dagger = ||x||^2 I``."""
        if self.source is not None:
            return self.source.norm()
        gram = self.entries @ self.entries.conj().T
        return float(np.sqrt(max(np.trace(gram).real / self.dim, 0.0)))

    @property
    def H(self) -> np.ndarray:
        return self.entries.conj().T


def _require(a: AlgebraElement, algebra: Algebra):
    if a.algebra is not algebra:
        raise AlgebraTagError(f"expected a {algebra.name.lower()}, got a {a.algebra.name.lower()}")


def quat_to_matrix(q: AlgebraElement) -> RepMatrix:
    _require(q, Algebra.QUATERNION)
    a0, a1, a2, a3 = q.coeffs
    m = np.array([
        [a0, -a1, -a2, -a3],
        [a1, a0, -a3, a2],
        [a2, a3, a0, -a1],
        [a3, -a2, a1, a0],
    ])
    return RepMatrix(m, 0.0, q)


def oct_left_matrix(a: AlgebraElement) -> RepMatrix:
    """Left representation ``omega(a)``: ``omega(a) @ vec(b) = vec(a * b)``."""
    _require(a, Algebra.OCTONION)
    a0, a1, a2, a3, a4, a5, a6, a7 = a.coeffs
    m = np.array([
        [a0, -a1, -a2, -a3, -a4, -a5, -a6, -a7],
        [a1, a0, -a3, a2, -a5, a4, a7, -a6],
        [a2, a3, a0, -a1, -a6, -a7, a4, a5],
        [a3, -a2, a1, a0, -a7, a6, -a5, a4],
        [a4, a5, a6, a7, a0, -a1, -a2, -a3],
        [a5, -a4, a7, -a6, a1, a0, a3, -a2],
        [a6, -a7, -a4, a5, a2, -a3, a0, a1],
        [a7, a6, -a5, -a4, a3, a2, -a1, a0],
    ])
    return RepMatrix(m, 0.0, a)


def oct_right_matrix(a: AlgebraElement) -> RepMatrix:
    """Right representation ``nu(a)``: ``nu(a) @ vec(b) = vec(b * a)``."""
    _require(a, Algebra.OCTONION)
    a0, a1, a2, a3, a4, a5, a6, a7 = a.coeffs
    m = np.array([
        [a0, -a1, -a2, -a3, -a4, -a5, -a6, -a7],
        [a1, a0, a3, -a2, a5, -a4, -a7, a6],
        [a2, -a3, a0, a1, a6, a7, -a4, -a5],
        [a3, a2, -a1, a0, a7, -a6, a5, -a4],
        [a4, -a5, -a6, -a7, a0, a1, a2, a3],
        [a5, a4, -a7, a6, -a1, a0, -a3, a2],
        [a6, a7, a4, -a5, -a2, a3, a0, -a1],
        [a7, -a6, a5, a4, -a3, -a2, a1, a0],
    ])
    return RepMatrix(m, 0.0, a)


def k8_metric() -> RepMatrix:
    """``K8 = diag(K4, I4)`` with the Minkowski block ``K4 = diag(1, -1, -1, -1)``."""
    return RepMatrix(np.diag([1.0, -1.0, -1.0, -1.0, 1.0, 1.0, 1.0, 1.0]))


def link_metric() -> RepMatrix:
    """``diag(1, -1, ..., -1)``, the sign matrix with ``nu(a) = K omega(a)^T K``.

    Conjugation by this matrix fixes the real axis and flips all seven
    imaginary axes. :func:`k8_metric` only flips three of them, so the
    identity fails whenever ``a4..a7`` are nonzero.
    """
    return RepMatrix(np.diag([1.0] + [-1.0] * 7))


def apply_phase(m: RepMatrix, theta: float) -> RepMatrix:
    """Multiply by ``z = e^{i theta}``; the phase accumulates modulo ``2 pi``."""
    if not np.isfinite(theta):
        raise ValueError("phase must be finite")
    if theta == 0.0:
        return m
    z = complex(np.cos(theta), np.sin(theta))
    phase = float(np.mod(m.phase + theta, 2.0 * np.pi))
    return RepMatrix(z * m.entries, phase, m.source)


def scalar_matrix(t: float) -> RepMatrix:
    """The ``1 x 1`` representation: the classical coherent-state case."""
    return RepMatrix(np.array([[t]]), 0.0, None)


def conjugate(a: AlgebraElement) -> AlgebraElement:
    c = a.coeffs.copy()
    c[1:] *= -1.0
    return AlgebraElement(a.algebra, c)


def _cd(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    # (a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))
    n = x.shape[0]
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[:h], x[h:]
    c, d = y[:h], y[h:]
    return np.concatenate([
        _cd(a, c) - _cd(_conj(d), b),
        _cd(d, a) + _cd(b, _conj(c)),
    ])


def _conj(x: np.ndarray) -> np.ndarray:
    y = x.copy()
    y[1:] *= -1.0
    return y


def cd_multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Product by Cayley-Dickson doubling R -> C -> H -> O.

    Independent of the hard-coded matrix tables; used to validate them.
    """
    if a.algebra is not b.algebra:
        raise AlgebraTagError(
            f"cannot multiply a {a.algebra.name.lower()} by a {b.algebra.name.lower()}"
        )
    return AlgebraElement(a.algebra, _cd(a.coeffs, b.coeffs))


def left_matrix(a: AlgebraElement) -> RepMatrix:
    """Left representation for either algebra."""
    if a.algebra is Algebra.QUATERNION:
        return quat_to_matrix(a)
    return oct_left_matrix(a)


def norm_residual(m: RepMatrix, norm_sq: float) -> float:
    """``max |M M^dagger - norm_sq I|`` together with ``M^dagger M``."""
    e = m.entries
    ident = norm_sq * np.eye(m.dim)
    return float(max(np.abs(e @ e.conj().T - ident).max(), np.abs(e.conj().T @ e - ident).max()))
