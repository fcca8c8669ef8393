"""Two-qubit initial states and their dephasing evolution.

Basis order is ``|00>, |01>, |10>, |11>`` throughout.  The chain only
dephases the qubits: each density-matrix element picks up the matching
decoherence factor, so evolution is an entrywise product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .chain import DecoherenceMatrix

_I2 = np.eye(2)
_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.diag([1.0, -1.0]).astype(complex)

#: Entries kept by the X-state truncation: diagonal plus the 00-11 and 01-10 coherences.
X_MASK = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))


class InvalidStateError(ValueError):
    """A density matrix failed validation; the message names the property."""


@dataclass(frozen=True)
class GenericPure:
    """Pure state ``(I + p(sx - tx) - sx tx - q(sy ty + sz tz)) / 4`` with q = sqrt(1 - p^2).

    ``x_only`` keeps only the X-shaped part of the evolved matrix, which is
    the reduced form the closed-form final eigenvectors diagonalize.
    """

    p: float
    x_only: bool = False
    q: float = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not (math.isfinite(p) and 0.0 <= p <= 1.0):
            raise InvalidStateError(f"p must lie in [0, 1], got {self.p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", math.sqrt(1.0 - p * p))


@dataclass(frozen=True)
class BellPhiPlus:
    """``(|00> + |11>) / sqrt 2``."""


@dataclass(frozen=True)
class Custom:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        validate_density(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


InitialStateSpec = Union[GenericPure, BellPhiPlus, Custom]


@dataclass(frozen=True)
class TwoQubitDensity:
    matrix: np.ndarray

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


def validate_density(m: np.ndarray, herm_tol=1e-12, trace_tol=1e-12, psd_tol=1e-10) -> None:
    if m.shape != (4, 4):
        raise InvalidStateError(f"shape: expected (4, 4), got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError("finite: matrix has non-finite entries")
    herm = np.max(np.abs(m - m.conj().T))
    if herm >= herm_tol:
        raise InvalidStateError(f"Hermitian: max |rho - rho^dagger| = {herm:.3e}")
    tr = np.trace(m)
    if abs(tr - 1.0) >= trace_tol:
        raise InvalidStateError(f"unit trace: trace = {tr:.15g}")
    lo = np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))
    if lo < -psd_tol:
        raise InvalidStateError(f"positive semidefinite: min eigenvalue = {lo:.3e}")


def generic_pure_matrix(p: float, q: float) -> np.ndarray:
    ops = (np.eye(4)
           + p * (np.kron(_SX, _I2) - np.kron(_I2, _SX))
           - np.kron(_SX, _SX)
           - q * (np.kron(_SY, _SY) + np.kron(_SZ, _SZ)))
    return 0.25 * ops


def initial_state(spec: InitialStateSpec) -> TwoQubitDensity:
    if isinstance(spec, GenericPure):
        return TwoQubitDensity(generic_pure_matrix(spec.p, spec.q))
    if isinstance(spec, BellPhiPlus):
        v = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2.0)
        return TwoQubitDensity(np.outer(v, v.conj()))
    if isinstance(spec, Custom):
        return TwoQubitDensity(np.array(spec.matrix))
    raise TypeError(f"unknown state spec {spec!r}")


def coefficient_matrix(spec: InitialStateSpec) -> np.ndarray:
    """Initial matrix entering the entrywise product (X-truncated if requested)."""
    rho0 = initial_state(spec).matrix
    if isinstance(spec, GenericPure) and spec.x_only:
        rho0 = np.where(X_MASK, rho0, 0.0)
    return rho0


def evolve_state(spec: InitialStateSpec, S: DecoherenceMatrix | np.ndarray) -> TwoQubitDensity:
    entries = S.entries if isinstance(S, DecoherenceMatrix) else np.asarray(S)
    return TwoQubitDensity(coefficient_matrix(spec) * entries)


def evolve_many(spec: InitialStateSpec, S_stack: np.ndarray) -> np.ndarray:
    """Entrywise product against a ``(T, 4, 4)`` stack of decoherence matrices."""
    return coefficient_matrix(spec)[None, :, :] * S_stack
