"""Ladder operators on the truncated Fock space and their lifts to C^n (x) H_M.

Truncation convention: ``a^dagger phi_M = 0``. Operators stay square and
identities that involve ``a a^dagger`` only hold on the interior block
``m < M``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .clifford_core import RepMatrix
from .rho_moments import RhoSequence


class FockKind(enum.Enum):
    ANNIHILATION = "a"
    CREATION = "adag"
    NUMBER = "N"
    CUSTOM = "custom"


class LiftedKind(enum.Enum):
    A = "A"
    ADAG = "Adag"
    N = "N"
    Q = "Q"
    P = "P"
    DISPLACEMENT = "D"
    CUSTOM = "custom"


_LIFT_KIND = {
    FockKind.ANNIHILATION: LiftedKind.A,
    FockKind.CREATION: LiftedKind.ADAG,
    FockKind.NUMBER: LiftedKind.N,
    FockKind.CUSTOM: LiftedKind.CUSTOM,
}


@dataclass(frozen=True)
class FockOperator:
    entries: np.ndarray
    kind: FockKind = FockKind.CUSTOM

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128)
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.entries @ other.entries)

    @property
    def H(self) -> "FockOperator":
        kind = {FockKind.ANNIHILATION: FockKind.CREATION,
                FockKind.CREATION: FockKind.ANNIHILATION}.get(self.kind, self.kind)
        return FockOperator(self.entries.conj().T, kind)


@dataclass(frozen=True)
class LiftedOperator:
    n: int
    fock_dim: int
    entries: np.ndarray
    kind: LiftedKind = LiftedKind.CUSTOM

    def __post_init__(self):
        e = np.array(self.entries, dtype=np.complex128)
        d = self.n * self.fock_dim
        if e.shape != (d, d):
            raise ValueError(f"lifted operator must be {d}x{d}, got {e.shape}")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def __matmul__(self, other: "LiftedOperator") -> "LiftedOperator":
        return LiftedOperator(self.n, self.fock_dim, self.entries @ other.entries)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.entries @ vec

    def interior_mask(self) -> np.ndarray:
        """Flat indices whose Fock level is below the truncation edge ``M``."""
        m = np.tile(np.arange(self.fock_dim), self.n)
        return m < self.fock_dim - 1


def ladder(rho: RhoSequence, M: int, kind: FockKind) -> FockOperator:
    """``a phi_m = sqrt(x_m) phi_{m-1}``, ``a^dagger = a^H``, ``N' phi_m = x_m phi_m``."""
    if M < 0:
        raise ValueError("M must be >= 0")
    rho = rho.extended(M)
    xs = rho.xs(M)
    if kind is FockKind.NUMBER:
        return FockOperator(np.diag(xs).astype(np.complex128), kind)
    a = np.diag(np.sqrt(xs[1:]), k=1).astype(np.complex128)
    if kind is FockKind.ANNIHILATION:
        return FockOperator(a, kind)
    if kind is FockKind.CREATION:
        return FockOperator(a.conj().T, kind)
    raise ValueError(f"ladder() does not build {kind}")


def lift(op: FockOperator, n: int) -> LiftedOperator:
    """``I_n (x) op``."""
    return LiftedOperator(n, op.dim, np.kron(np.eye(n), op.entries), _LIFT_KIND[op.kind])


def quadrature_pair(rho: RhoSequence, M: int, n: int) -> tuple[LiftedOperator, LiftedOperator]:
    """``Q = (A + A^dagger)/sqrt 2`` and ``P = (A - A^dagger)/(i sqrt 2)``."""
    a = lift(ladder(rho, M, FockKind.ANNIHILATION), n).entries
    ad = a.conj().T
    q = (a + ad) / math.sqrt(2.0)
    p = (a - ad) / (1j * math.sqrt(2.0))
    return (LiftedOperator(n, M + 1, q, LiftedKind.Q),
            LiftedOperator(n, M + 1, p, LiftedKind.P))


def displacement_exponent(theta_z: RepMatrix, rho: RhoSequence, M: int) -> np.ndarray:
    """``Theta_z (x) a^dagger - Theta_z^dagger (x) a`` as a dense matrix."""
    a = ladder(rho, M, FockKind.ANNIHILATION).entries
    z = theta_z.entries
    return np.kron(z, a.conj().T) - np.kron(z.conj().T, a)


def displacement(theta_z: RepMatrix, rho: RhoSequence, M: int) -> LiftedOperator:
    """Dense ``exp(Theta_z (x) a^dagger - Theta_z^dagger (x) a)``.

    Only meaningful for ``rho(m) = m!``; unitary up to truncation error on
    vectors supported on low Fock levels.
    """
    if not rho.is_canonical:
        raise ValueError("the exponential form is only defined for rho(m) = m!")
    e = displacement_exponent(theta_z, rho, M)
    return LiftedOperator(theta_z.dim, M + 1, kernels.expm(e), LiftedKind.DISPLACEMENT)


def expm_eig(e: np.ndarray) -> np.ndarray:
    """Exponential of a skew-Hermitian matrix through ``eigh`` of ``iE``.

    Independent of the Pade path; used as its cross-check.
    """
    h = 1j * np.asarray(e, dtype=np.complex128)
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w)) @ v.conj().T
