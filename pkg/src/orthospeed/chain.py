"""Spectral quantities of the dressed XY chain and the decoherence factors.

The two qubits couple to the chain through their joint ``sigma^z`` value, so
each computational basis state ``|00>, |01>, |10>, |11>`` (channels 1..4)
sees the chain under a shifted transverse field.  Every channel is a free
fermion model whose Bogoliubov data has a closed form; the decoherence
factor between two channels is a product over momentum pairs ``(k, -k)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

#: Pairs ``(alpha, beta)`` with ``alpha < beta`` (1-based) that need a product.
UPPER_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 4), (3, 4))

TIME_CONVENTIONS = ("exact", "printed")


class ParameterWarning(UserWarning):
    """A parameter sits outside its physically motivated range."""


class InvariantViolation(ArithmeticError):
    """A computed quantity broke one of its mathematical invariants."""


@dataclass(frozen=True)
class ChainParams:
    """Environment and coupling configuration.

    ``time_convention`` selects the phase rate of the product formula:
    ``"exact"`` uses the pair energies of the quasiparticle Hamiltonian
    (frequencies ``Omega``), ``"printed"`` halves every frequency.
    """

    n_sites: int
    anisotropy: float
    field: float
    dm: float = 0.0
    coupling: float = 0.1
    time_convention: str = "exact"

    def __post_init__(self):
        n = self.n_sites
        if isinstance(n, bool) or int(n) != n:
            raise ValueError(f"n_sites must be an integer, got {n!r}")
        object.__setattr__(self, "n_sites", int(n))
        if self.n_sites < 3 or self.n_sites % 2 == 0:
            raise ValueError(f"n_sites must be odd and >= 3, got {self.n_sites}")
        for name in ("anisotropy", "field", "dm", "coupling"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.time_convention not in TIME_CONVENTIONS:
            raise ValueError(
                f"time_convention must be one of {TIME_CONVENTIONS}, "
                f"got {self.time_convention!r}"
            )
        if not 0.0 <= self.anisotropy <= 1.0:
            warnings.warn(
                f"anisotropy {self.anisotropy} outside [0, 1]", ParameterWarning, stacklevel=3
            )
        if not -1.0 <= self.dm <= 1.0:
            warnings.warn(f"dm {self.dm} outside [-1, 1]", ParameterWarning, stacklevel=3)

    @property
    def n_modes(self) -> int:
        """Number of paired modes M = (N - 1) / 2."""
        return (self.n_sites - 1) // 2

    def replace(self, **changes) -> "ChainParams":
        fields = dict(
            n_sites=self.n_sites,
            anisotropy=self.anisotropy,
            field=self.field,
            dm=self.dm,
            coupling=self.coupling,
            time_convention=self.time_convention,
        )
        fields.update(changes)
        return ChainParams(**fields)


class DressedFields(NamedTuple):
    """Effective transverse field per channel (|00>, |01>, |10>, |11>)."""

    l1: float
    l2: float
    l3: float
    l4: float


class ModeIndex(NamedTuple):
    k: int
    momentum: float


@dataclass(frozen=True)
class DecoherenceMatrix:
    """``entries[a, b]`` holds S_ab(t) for 0-based channel indices."""

    entries: np.ndarray
    time: float

    def __getitem__(self, idx):
        return self.entries[idx]

    @property
    def s14(self) -> complex:
        return complex(self.entries[0, 3])


def dressed_fields(params: ChainParams) -> DressedFields:
    lam, g = params.field, params.coupling
    return DressedFields(lam + g, lam, lam, lam - g)


def mode_indices(n_sites: int, include_zero: bool = False) -> list[ModeIndex]:
    """Momentum modes ``K = 2 pi k / N``; by default only the paired ``k = 1..M``."""
    m = (n_sites - 1) // 2
    ks = range(-m, m + 1) if include_zero else range(1, m + 1)
    return [ModeIndex(k, 2.0 * math.pi * k / n_sites) for k in ks]


def dispersion(K, lam_nu, gamma, dm):
    """Quasiparticle energy ``2 sqrt((lam - cos K)^2 + gamma^2 sin^2 K) + 4 D sin K``.

    Not clamped: strong DM in the negative direction gives negative values.
    """
    return (2.0 * np.sqrt((lam_nu - np.cos(K)) ** 2 + gamma**2 * np.sin(K) ** 2)
            + 4.0 * dm * np.sin(K))


def bogoliubov_angle(K, lam_nu, gamma):
    """Two-argument arctangent of ``(gamma sin K, lam_nu - cos K)``.

    At the doubly degenerate point (both arguments zero) the angle is 0.
    """
    y = gamma * np.sin(K)
    x = lam_nu - np.cos(K)
    theta = np.where((y == 0) & (x == 0), 0.0, np.arctan2(y, x))
    return theta if theta.ndim else float(theta)


def eta(K, lam_nu, lam, gamma):
    """Half-angle difference between the dressed and the bare Bogoliubov rotation."""
    return 0.5 * (bogoliubov_angle(K, lam_nu, gamma) - bogoliubov_angle(K, lam, gamma))


def _rate(params: ChainParams) -> float:
    return 1.0 if params.time_convention == "exact" else 0.5


def _mode_factor(t, ea, eb, wa, wb):
    d = ea - eb
    diff = np.exp(1j * t * (wa - wb))
    summ = np.exp(1j * t * (wa + wb))
    return (np.cos(d) * (np.cos(ea) * np.cos(eb) * diff + np.sin(ea) * np.sin(eb) * np.conj(diff))
            - np.sin(d) * (np.cos(ea) * np.sin(eb) * summ - np.sin(ea) * np.cos(eb) * np.conj(summ)))


def decoherence_factor(t, alpha: int, beta: int, params: ChainParams):
    """S_{alpha beta}(t) for 1-based channels; ``t`` may be a scalar or an array.

    Product over the paired modes ``k = 1..M`` of the per-mode overlap of the
    two evolved pair ground states.  With the ``"exact"`` time convention the
    phases advance at ``Omega`` per unit time, matching exact propagation of
    the pair Hamiltonian; ``"printed"`` advances them at ``Omega / 2``.
    """
    if alpha not in (1, 2, 3, 4) or beta not in (1, 2, 3, 4):
        raise ValueError(f"channels must be in 1..4, got ({alpha}, {beta})")
    t_arr = np.asarray(t, dtype=float)
    fields = dressed_fields(params)
    la, lb = fields[alpha - 1], fields[beta - 1]
    out = np.ones(t_arr.shape, dtype=complex)
    if la == lb:
        return out if t_arr.ndim else complex(out)
    gamma, dm, lam = params.anisotropy, params.dm, params.field
    scaled = _rate(params) * t_arr
    for mode in mode_indices(params.n_sites):
        K = mode.momentum
        out = out * _mode_factor(
            scaled,
            eta(K, la, lam, gamma),
            eta(K, lb, lam, gamma),
            dispersion(K, la, gamma, dm),
            dispersion(K, lb, gamma, dm),
        )
    return out if t_arr.ndim else complex(out)


def decoherence_matrices(times, params: ChainParams) -> np.ndarray:
    """Stack of decoherence matrices, shape ``(len(times), 4, 4)``."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    S = np.ones((times.size, 4, 4), dtype=complex)
    for a, b in UPPER_PAIRS:
        f = decoherence_factor(times, a, b, params)
        S[:, a - 1, b - 1] = f
        S[:, b - 1, a - 1] = np.conj(f)
    return S


def decoherence_matrix(t: float, params: ChainParams) -> DecoherenceMatrix:
    if not math.isfinite(t):
        raise ValueError(f"time must be finite, got {t!r}")
    return DecoherenceMatrix(decoherence_matrices([t], params)[0], float(t))


def decoherence_violations(S: np.ndarray, tol: float = 1e-10) -> list[str]:
    """Names of the decoherence-matrix invariants that ``S`` breaks (empty if none).

    ``S`` may be a single 4x4 matrix or a stack of them.
    """
    S = np.asarray(S)
    if S.ndim == 2:
        S = S[None]
    problems = []
    diag = np.diagonal(S, axis1=1, axis2=2)
    if np.max(np.abs(diag - 1.0)) > tol:
        problems.append("unit diagonal")
    if np.max(np.abs(S - np.conj(np.swapaxes(S, 1, 2)))) > tol:
        problems.append("conjugate symmetry")
    if np.max(np.abs(S)) > 1.0 + tol:
        problems.append("modulus bound")
    if np.any(S[:, 1, 2] != 1.0) or np.any(S[:, 2, 1] != 1.0):
        problems.append("S23 = 1")
    if np.min(np.linalg.eigvalsh(S)) < -tol:
        problems.append("positive semidefinite")
    return problems
