"""Acceptance criteria, one recorded pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v``; the summary section at the
end lists every criterion.  ``python tests/test_acceptance.py`` does the same
without pytest's per-test report.
"""
import itertools

import numpy as np
import pytest

from orthospeed import runner
from orthospeed.chain import (
    ChainParams,
    DecoherenceMatrix,
    decoherence_factor,
    decoherence_matrices,
    decoherence_violations,
)
from orthospeed.config import load
from orthospeed.eigen import eigensystem_analytic, eigensystem_numeric
from orthospeed.oracle import divergence_report, oracle_decoherence_factor
from orthospeed.presets import PRESETS
from orthospeed.signal import find_orthogonality_events, orthogonality_signal
from orthospeed.states import BellPhiPlus, GenericPure, evolve_state, validate_density

from conftest import random_params, record

GRID = np.arange(2001) * 0.05
PES = GenericPure(0.5)
MES = BellPhiPlus()


def events(spec, params, grid=GRID):
    return find_orthogonality_events(orthogonality_signal(spec, params, grid), 0.02)


def check(criterion, ok, detail):
    record(criterion, ok, detail)
    assert ok, detail


def test_c01_decoherence_invariants():
    rng = np.random.default_rng(1)
    worst, broken = 0.0, []
    for _ in range(1000):
        params = random_params(rng)
        t = rng.uniform(0, 200)
        S = decoherence_matrices([t], params)[0]
        broken += decoherence_violations(S, tol=1e-10)
        worst = max(worst, np.max(np.abs(np.diag(S) - 1)), np.max(np.abs(S - S.conj().T)),
                    np.max(np.abs(S)) - 1, -np.min(np.linalg.eigvalsh(S)))
    check(1, not broken, f"1000 draws, worst deviation {worst:.1e}, violations {sorted(set(broken)) or 'none'}")


def test_c02_oracle_equivalence():
    times = np.arange(0, 50.0001, 0.5)
    worst = 0.0
    for n, gamma, lam, g in itertools.product((3, 7, 13, 27), (0, 0.5, 1), (0, 0.2, 0.9, 1), (0.05, 0.1, 0.3)):
        params = ChainParams(n, gamma, lam, 0.0, g)
        for a, b in itertools.combinations(range(1, 5), 2):
            gap = np.max(np.abs(decoherence_factor(times, a, b, params)
                                - oracle_decoherence_factor(times, a, b, params)))
            worst = max(worst, gap)
    report = divergence_report(ChainParams(13, 0.5, 0.1, 0.3, 0.1), np.arange(0, 50.0001, 0.05))
    rng = np.random.default_rng(2)
    dm_gap = 0.0
    for _ in range(100):
        params = random_params(rng)
        t = rng.uniform(0, 100, size=8)
        a = oracle_decoherence_factor(t, 1, 4, params)
        b = oracle_decoherence_factor(t, 1, 4, params.replace(dm=rng.uniform(-1, 1)))
        dm_gap = max(dm_gap, np.max(np.abs(a - b)))
    ok = worst < 1e-9 and dm_gap < 1e-12 and report.dm_sensitive
    check(2, ok, f"D=0 max gap {worst:.1e}; D=0.3 report max gap {report.max_gap:.3f} "
                 f"(dm_sensitive={report.dm_sensitive}); oracle D-dependence {dm_gap:.1e}")


def test_c03_channel_evolution():
    rng = np.random.default_rng(3)
    failures, purity_gap = 0, 0.0
    for i in range(1000):
        params = random_params(rng)
        S = decoherence_matrices([rng.uniform(0, 200)], params)[0]
        for spec in (GenericPure(rng.uniform(0, 1), x_only=bool(i % 2)), MES):
            try:
                validate_density(evolve_state(spec, S).matrix, herm_tol=1e-12, trace_tol=1e-12, psd_tol=1e-10)
            except ValueError:
                failures += 1
        purity = evolve_state(MES, S).purity
        purity_gap = max(purity_gap, abs(purity - (1 + abs(S[0, 3]) ** 2) / 2))
    check(3, failures == 0 and purity_gap < 1e-12,
          f"1000 cases, invalid states {failures}, Bell purity gap {purity_gap:.1e}")


def test_c04_eigen_agreement():
    rng = np.random.default_rng(4)
    worst, cases, subspace = 1.0, 0, 0
    while cases < 500:
        params = random_params(rng)
        S = decoherence_matrices([rng.uniform(0.1, 100)], params)[0]
        if abs(S[0, 3]) < 1e-6:
            continue
        dm = DecoherenceMatrix(S, 0.0)
        spec = MES if cases % 2 else GenericPure(rng.uniform(0.05, 1))
        target = spec if spec == MES else GenericPure(spec.p, x_only=True)
        rho = evolve_state(target, dm).matrix
        analytic = eigensystem_analytic(spec, dm, "final")
        numeric = eigensystem_numeric(rho)
        w, V = np.linalg.eigh(rho)
        for v, lam in zip(analytic.vectors, analytic.values):
            gaps = np.abs(numeric.values - lam)
            j = int(np.argmin(gaps))
            if np.sort(gaps)[1] > 1e-8:
                worst = min(worst, abs(np.vdot(numeric.vectors[j], v)))
            else:
                # degenerate eigenvalue: compare against the whole eigenspace
                block = V[:, np.abs(w - lam) < 1e-8]
                worst = min(worst, float(np.linalg.norm(block.conj().T @ v) ** 2))
                subspace += 1
        cases += 1
    check(4, worst > 1 - 1e-10,
          f"500 cases, worst overlap 1 - {1 - worst:.1e} ({subspace} degenerate vectors checked by subspace)")


def test_c05_bell_overlap_identity():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(20):
        s = orthogonality_signal(MES, random_params(rng), GRID)
        worst = max(worst, np.max(np.abs(s.magnitude - np.abs(np.cos(np.angle(s.s14) / 2)))))
    check(5, worst < 1e-10, f"20 parameter sets, max deviation {worst:.1e}")


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0])
def test_c06_site_count_trend(gamma):
    n7 = events(PES, ChainParams(7, gamma, 0.0, 0.0, 0.1)).count
    n27 = events(PES, ChainParams(27, gamma, 0.0, 0.0, 0.1)).count
    check(6, n27 >= n7, f"gamma={gamma:g}: N=27 {n27} events vs N=7 {n7}")


def test_c07_model_ordering():
    first = [events(PES, ChainParams(7, g, 0.0, 0.0, 0.1)).first_event for g in (0.0, 0.5, 1.0)]
    ok = None not in first and first[0] <= first[1] + 0.5 and first[1] <= first[2] + 0.5
    check(7, ok, "first events gamma 0/0.5/1: " + ", ".join(
        "none" if f is None else f"{f:.3f}" for f in first))


def test_c08_coupling_trend():
    lo = events(PES, ChainParams(7, 0.0, 0.0, 0.0, 0.1))
    hi = events(PES, ChainParams(7, 0.0, 0.0, 0.0, 0.3))
    ok = hi.first_event is not None and (lo.first_event is None or hi.first_event < lo.first_event)
    check(8, ok, f"first event g=0.3 {hi.first_event:.3f} vs g=0.1 "
                 f"{'none' if lo.first_event is None else f'{lo.first_event:.3f}'} "
                 f"(counts {hi.count} vs {lo.count})")


def test_c09_landmarks():
    params = ChainParams(3, 0.0, 1.0, 0.5, 0.05)
    mes = events(MES, params).first_event
    pes = events(PES, params).first_event
    mes_ok = mes is not None and 10.5 <= mes <= 19.5
    pes_ok = pes is not None and 21.0 <= pes <= 39.0
    record(9, mes_ok, f"MES first event {mes:.3f} (band [10.5, 19.5])")
    record(9, pes_ok, f"PES first event {pes:.3f} (band [21, 39])")
    assert mes_ok and pes_ok, f"MES {mes}, PES {pes}"


def test_c10_dm_trend():
    counts = {}
    for dm in (0.0, 0.3):
        counts[dm] = [events(PES, ChainParams(13, g, 0.1, dm, 0.1)).count for g in (0.0, 0.5, 1.0)]
    ok = all(b >= a for a, b in zip(counts[0.0], counts[0.3]))
    check(10, ok, f"event counts for gamma 0/0.5/1: D=0.3 {counts[0.3]} vs D=0 {counts[0.0]}")


@pytest.mark.parametrize("name", list(PRESETS))
def test_c11_determinism(name):
    preset = PRESETS[name]
    run = runner.run_signal if preset.mode == "signal" else runner.run_sweep
    config = load(preset=name)
    one = run(config, "csv", threads=1)
    many = run(config, "csv", threads=4)
    check(11, one == many, f"{name}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider",
                          "-W", "ignore::pytest.PytestAssertRewriteWarning", *sys.argv[1:]]))
