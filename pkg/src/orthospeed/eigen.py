"""Eigenvectors of the initial and evolved two-qubit states.

Two routes: closed forms for the Bell state and the generic pure family,
and a numeric Hermitian solver used for everything else and as a cross-check.
Both return vectors in the same deterministic gauge (see ``fix_phase``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import DecoherenceMatrix
from .states import (
    BellPhiPlus,
    GenericPure,
    InitialStateSpec,
    TwoQubitDensity,
    evolve_state,
    initial_state,
)

DEGENERACY_TOL = 1e-10
COLLAPSE_TOL = 1e-14
_R2 = 1.0 / math.sqrt(2.0)


class ClosedFormError(ArithmeticError):
    """A closed-form eigenvector is undefined at this point."""


class CoherenceCollapsedError(ClosedFormError):
    """The final X-block eigenvectors are undefined because |S14| vanished."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs sorted by descending eigenvalue.

    ``vectors[i]`` is the unit eigenvector for ``values[i]``.  ``labels[i]``
    names it: the index used by the closed forms (1..4) for the analytic
    route, the 1-based descending rank for the numeric route.
    """

    values: np.ndarray
    vectors: np.ndarray
    labels: tuple[int, ...]
    source: str

    def vector(self, label: int) -> np.ndarray:
        return self.vectors[self.labels.index(label)]

    def value(self, label: int) -> float:
        return float(self.values[self.labels.index(label)])


def fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate ``v`` so its first largest-magnitude component is real and >= 0."""
    mags = np.abs(v)
    idx = int(np.argmax(mags >= mags.max() - tol))
    out = v * (np.conj(v[idx]) / mags[idx])
    out[idx] = mags[idx]
    return out


def _canonical_basis(block: np.ndarray) -> np.ndarray:
    """Basis of span(block columns) built by projecting e_0, e_1, ... in order."""
    dim = block.shape[1]
    proj = block @ block.conj().T
    picked = []
    for i in range(4):
        v = proj[:, i].copy()
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            v /= norm
            picked.append(v)
            proj = proj - np.outer(v, v.conj())
        if len(picked) == dim:
            break
    return np.array(picked).T


def eigensystem_numeric(rho: TwoQubitDensity | np.ndarray) -> EigenSystem:
    """Full Hermitian eigendecomposition with deterministic degenerate subspaces."""
    m = rho.matrix if isinstance(rho, TwoQubitDensity) else np.asarray(rho)
    m = 0.5 * (m + m.conj().T)
    w, V = np.linalg.eigh(m)
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    vecs = []
    i = 0
    while i < 4:
        j = i + 1
        while j < 4 and abs(w[j] - w[i]) < DEGENERACY_TOL:
            j += 1
        block = V[:, i:j] if j - i == 1 else _canonical_basis(V[:, i:j])
        vecs.extend(fix_phase(block[:, c]) for c in range(j - i))
        i = j
    return EigenSystem(w.copy(), np.array(vecs), (1, 2, 3, 4), "numeric")


def _normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def x1_scalar(p: float, q: float) -> float:
    return abs(2.0 * q * (math.sqrt(p * p + q * q) + q) + p * p)


def _pure_initial_vectors(p: float, q: float) -> list[np.ndarray]:
    if p == 0.0:
        raise ClosedFormError("closed-form eigenvectors divide by p; p = 0 has no closed form")
    s = math.sqrt(p * p + q * q)
    x1 = x1_scalar(p, q)
    edge = 1.0 / math.sqrt(2.0 * x1 / p**2 + 2.0)
    mid = abs(p) / (math.sqrt(2.0) * p * math.sqrt(p**2 + x1))
    mu3 = [-edge, mid * (q - s), mid * (s - q), edge]
    mu4 = [-edge, mid * (s + q), -mid * (s + q), edge]
    # printed normalization of mu3 reuses X1 and is off; only the direction is kept
    return [
        np.array([_R2, 0, 0, _R2], dtype=complex),
        np.array([0, _R2, _R2, 0], dtype=complex),
        _normalized(mu3),
        _normalized(mu4),
    ]


def _bell_initial_vectors() -> list[np.ndarray]:
    return [
        np.array([0, 1, 0, 0], dtype=complex),
        np.array([0, 0, 1, 0], dtype=complex),
        np.array([_R2, 0, 0, _R2], dtype=complex),
        np.array([-_R2, 0, 0, _R2], dtype=complex),
    ]


def _unit_s14(S: DecoherenceMatrix) -> complex:
    s14 = S.s14
    if abs(s14) < COLLAPSE_TOL:
        raise CoherenceCollapsedError(
            "coherence collapsed; final eigenvectors of the X-block are not uniquely defined"
        )
    # sqrt(S14 / S41) and |S14| / S41 both resolve to this unit phase
    return s14 / abs(s14)


def _final_vectors(spec: InitialStateSpec, S: DecoherenceMatrix) -> list[np.ndarray]:
    u = _unit_s14(S)
    if isinstance(spec, BellPhiPlus):
        return [
            np.array([0, 1, 0, 0], dtype=complex),
            np.array([0, 0, 1, 0], dtype=complex),
            np.array([u * _R2, 0, 0, _R2]),
            np.array([-u * _R2, 0, 0, _R2]),
        ]
    return [
        np.array([0, _R2, _R2, 0], dtype=complex),
        np.array([0, -_R2, _R2, 0], dtype=complex),
        np.array([-u * _R2, 0, 0, _R2]),
        np.array([u * _R2, 0, 0, _R2]),
    ]


def _assemble(vectors: list[np.ndarray], rho: np.ndarray) -> EigenSystem:
    vecs = np.array([fix_phase(v) for v in vectors])
    values = np.real(np.einsum("ij,jk,ik->i", vecs.conj(), rho, vecs))
    order = np.argsort(-values, kind="stable")
    labels = tuple(int(i) + 1 for i in order)
    return EigenSystem(values[order], vecs[order], labels, "analytic")


def eigensystem_analytic(
    spec: InitialStateSpec, S: DecoherenceMatrix | None = None, when: str = "initial"
) -> EigenSystem:
    """Closed-form eigenvectors, labelled 1..4 as in the closed forms.

    For the generic pure family the final vectors diagonalize the X-shaped
    part of the evolved state (the only part they are exact for); their
    eigenvalues are taken against that matrix.

    Raises ``CoherenceCollapsedError`` when ``when="final"`` and |S14| < 1e-14.
    """
    if not isinstance(spec, (GenericPure, BellPhiPlus)):
        raise TypeError("closed forms exist only for GenericPure and BellPhiPlus")
    if when == "initial":
        rho = initial_state(spec).matrix
        if isinstance(spec, BellPhiPlus):
            return _assemble(_bell_initial_vectors(), rho)
        return _assemble(_pure_initial_vectors(spec.p, spec.q), rho)
    if when == "final":
        if S is None:
            raise ValueError("final eigenvectors need a decoherence matrix")
        target = spec if isinstance(spec, BellPhiPlus) else GenericPure(spec.p, x_only=True)
        rho = evolve_state(target, S).matrix
        return _assemble(_final_vectors(spec, S), rho)
    raise ValueError(f"when must be 'initial' or 'final', got {when!r}")
