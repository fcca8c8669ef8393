"""Orthogonality overlap between initial and evolved eigenvectors, and its dips."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .chain import (
    ChainParams,
    DecoherenceMatrix,
    InvariantViolation,
    decoherence_matrices,
    decoherence_violations,
)
from .eigen import (
    COLLAPSE_TOL,
    ClosedFormError,
    eigensystem_analytic,
    eigensystem_numeric,
)
from .states import BellPhiPlus, GenericPure, InitialStateSpec, evolve_many

DEFAULT_PAIR = (3, 3)
DEFAULT_THRESHOLD = 0.02
CHUNK = 512
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OrthogonalitySignal:
    """Samples of S_or(t) = <psi_a(t) | mu_b(0)> for ``pair = (a, b)``.

    ``fallback[i]`` marks samples whose final eigenvector came from the
    numeric solver because the closed form was undefined there.  ``sampler``
    re-evaluates the overlap at arbitrary times (used to refine dips).
    """

    times: np.ndarray
    overlaps: np.ndarray
    pair: tuple[int, int] = DEFAULT_PAIR
    s14: Optional[np.ndarray] = None
    fallback: Optional[np.ndarray] = None
    sampler: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    method: str = "analytic"

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.overlaps = np.asarray(self.overlaps, dtype=complex)
        if self.times.shape != self.overlaps.shape:
            raise ValueError("times and overlaps must have the same length")
        if self.fallback is None:
            self.fallback = np.zeros(self.times.shape, dtype=bool)

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.overlaps)


@dataclass(frozen=True)
class OrthogonalityEvents:
    event_times: tuple[float, ...]
    threshold: float

    @property
    def count(self) -> int:
        return len(self.event_times)

    @property
    def first_event(self) -> Optional[float]:
        return self.event_times[0] if self.event_times else None

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "event_times": list(self.event_times),
            "first_event": self.first_event,
            "threshold": self.threshold,
        }


def _final_vectors_batch(spec, s14: np.ndarray) -> np.ndarray:
    """Closed-form final eigenvectors for many S14 values, shape (T, 4, 4).

    Axis 1 is the label (1..4 -> 0..3); vectors carry the fixed phase gauge.
    Collapsed samples get u = 1 and must be replaced by the caller.
    """
    mag = np.abs(s14)
    u = np.where(mag < COLLAPSE_TOL, 1.0 + 0j, s14 / np.where(mag < COLLAPSE_TOL, 1.0, mag))
    r2 = 1.0 / math.sqrt(2.0)
    T = s14.shape[0]
    out = np.zeros((T, 4, 4), dtype=complex)
    # after fixing the phase on the (tied) first component, u moves to the last one
    if isinstance(spec, BellPhiPlus):
        out[:, 0, 1] = 1.0
        out[:, 1, 2] = 1.0
        out[:, 2, 0], out[:, 2, 3] = r2, r2 * np.conj(u)
        out[:, 3, 0], out[:, 3, 3] = r2, -r2 * np.conj(u)
    else:
        out[:, 0, 1], out[:, 0, 2] = r2, r2
        out[:, 1, 1], out[:, 1, 2] = r2, -r2
        out[:, 2, 0], out[:, 2, 3] = r2, -r2 * np.conj(u)
        out[:, 3, 0], out[:, 3, 3] = r2, r2 * np.conj(u)
    return out


def _collapse_rank(spec, label: int) -> int:
    """Descending rank (0-based) of ``label`` in the final system as |S14| -> 0+."""
    tiny = np.ones((4, 4), dtype=complex)
    tiny[0, 3] = tiny[3, 0] = 10 * COLLAPSE_TOL
    system = eigensystem_analytic(spec, DecoherenceMatrix(tiny, 0.0), "final")
    return system.labels.index(label)


def _decoherence(times, params, check):
    S = decoherence_matrices(times, params)
    if check:
        broken = decoherence_violations(S)
        if broken:
            raise InvariantViolation(f"decoherence matrix violates: {', '.join(broken)}")
    return S


def _closed_form_overlaps(spec, params, times, pair, check=False):
    a, b = pair
    S = _decoherence(times, params, check)
    s14 = S[:, 0, 3]
    mu = eigensystem_analytic(spec, when="initial").vector(b)
    psi = _final_vectors_batch(spec, s14)[:, a - 1, :]
    collapsed = np.abs(s14) < COLLAPSE_TOL
    if np.any(collapsed):
        target = spec if isinstance(spec, BellPhiPlus) else GenericPure(spec.p, x_only=True)
        rho = evolve_many(target, S[collapsed])
        rank = _collapse_rank(spec, a)
        psi[collapsed] = [eigensystem_numeric(r).vectors[rank] for r in rho]
    return psi.conj() @ mu, s14, collapsed


def _numeric_overlaps(spec, params, times, pair, check=False):
    a, b = pair
    S = _decoherence(times, params, check)
    rho0 = evolve_many(spec, np.ones((1, 4, 4), dtype=complex))[0]
    mu = eigensystem_numeric(rho0).vector(b)
    rho = evolve_many(spec, S)
    psi = np.array([eigensystem_numeric(r).vector(a) for r in rho])
    return psi.conj() @ mu, S[:, 0, 3], np.zeros(len(times), dtype=bool)


def _has_closed_form(spec) -> bool:
    if isinstance(spec, BellPhiPlus):
        return True
    if isinstance(spec, GenericPure):
        try:
            eigensystem_analytic(spec, when="initial")
        except ClosedFormError:
            return False
        return True
    return False


def orthogonality_signal(
    spec: InitialStateSpec,
    params: ChainParams,
    t_grid,
    pair: tuple[int, int] = DEFAULT_PAIR,
    threads: int = 1,
    check: bool = False,
) -> OrthogonalitySignal:
    """Overlap of final eigenvector ``pair[0]`` with initial eigenvector ``pair[1]``.

    Bell and generic-pure states use the closed-form eigenvectors (labels
    1..4 as in the closed forms); the generic-pure final vectors are those
    of the X-shaped part of the evolved state.  Other states use the numeric
    solver with labels meaning descending eigenvalue rank.

    The grid is split into fixed-size chunks, so the result does not depend
    on ``threads``.  With ``check`` every decoherence matrix and overlap is
    validated and ``InvariantViolation`` raised on failure.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if times.size > 1 and np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly increasing")
    if any(x not in (1, 2, 3, 4) for x in pair):
        raise ValueError(f"pair labels must be in 1..4, got {pair}")
    closed = _has_closed_form(spec)
    kernel = _closed_form_overlaps if closed else _numeric_overlaps

    def run(chunk):
        return kernel(spec, params, chunk, pair, check)

    chunks = [times[i:i + CHUNK] for i in range(0, times.size, CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    overlaps = np.concatenate([p[0] for p in parts])
    s14 = np.concatenate([p[1] for p in parts])
    fallback = np.concatenate([p[2] for p in parts])
    if check and np.max(np.abs(overlaps)) > 1.0 + 1e-10:
        raise InvariantViolation("overlap modulus exceeds 1")

    def sampler(t):
        return kernel(spec, params, np.atleast_1d(np.asarray(t, dtype=float)), pair)[0]

    return OrthogonalitySignal(
        times, overlaps, tuple(pair), s14, fallback, sampler,
        "analytic" if closed else "numeric",
    )


def golden_section_min(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-4):
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 <= f2 else (x2, f2)


def find_orthogonality_events(
    signal: OrthogonalitySignal, threshold: float = DEFAULT_THRESHOLD, tol: float = 1e-4
) -> OrthogonalityEvents:
    """Times where |S_or| dips below ``threshold``.

    Every interior local minimum of the sampled magnitude below 0.5 is
    refined by golden-section search over its two neighbouring grid cells;
    refined minima below ``threshold`` are reported.  Without a sampler the
    search runs on the piecewise-linear interpolant of the samples.
    """
    if not 0.0 < threshold <= 0.5:
        raise ValueError(f"threshold must lie in (0, 0.5], got {threshold}")
    t, mag = signal.times, signal.magnitude
    if t.size == 0:
        raise ValueError("cannot search an empty signal")
    if signal.sampler is not None:
        def f(x):
            return float(np.abs(signal.sampler(np.array([x]))[0]))
    else:
        def f(x):
            return float(np.interp(x, t, mag))

    events: list[float] = []
    for i in range(1, t.size - 1):
        if not (mag[i] <= mag[i - 1] and mag[i] < mag[i + 1] and mag[i] < 0.5):
            continue
        x, fx = golden_section_min(f, t[i - 1], t[i + 1], tol)
        if fx > mag[i]:
            x, fx = float(t[i]), float(mag[i])
        if fx < threshold and (not events or x - events[-1] > tol):
            events.append(float(x))
    return OrthogonalityEvents(tuple(events), float(threshold))
