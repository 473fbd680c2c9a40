"""Acceptance criteria, each at its stated tolerance.

The summary at the end of a pytest run prints one PASS/FAIL line per
criterion (see conftest.py).
"""
import time

import numpy as np
import pytest

from conftest import TABLE_K2_HALF, random_params
from lmgstieltjes.cli.pipeline import RunConfig, run_verify
from lmgstieltjes.electrostatics import all_equilibria, electro_gradient, match_to_roots
from lmgstieltjes.fock import full_spectrum, sector_spectrum, union_of_sectors
from lmgstieltjes.jacobi import classical_van_vleck, jacobi_monic, jacobi_zeros
from lmgstieltjes.model import PhysicalParams, SpectralParams, energy_from_roots, to_spectral
from lmgstieltjes.polyroots import bae_residual, bae_residual_scale
from lmgstieltjes.recurrence import classical_limit_pair
from lmgstieltjes.spectrum import solve_spectrum
from lmgstieltjes.sumrules import sum_rule_report


@pytest.fixture(scope="module")
def grid():
    """k = 1..50, 20 random (alpha, beta, gamma) draws each, solved once."""
    rng = np.random.default_rng(2024)
    out = []
    for k in range(1, 51):
        for s in random_params(rng, 20):
            out.append((k, s, solve_spectrum(k, s)))
    return out


def test_criterion_1_table_reproduction(half):
    states = solve_spectrum(2, half)
    assert len(states) == 3
    for st, (zeros, total, (b0, b1), f) in zip(states, TABLE_K2_HALF):
        assert np.allclose(st.roots, zeros, atol=5e-4, rtol=0)
        assert abs(st.roots.sum() - total) < 5e-4
        assert np.allclose(st.poly.coeffs, [b0, b1, 1.0], atol=5e-4, rtol=0)
        assert abs(st.f - f) < 5e-4
    times = []
    for _ in range(7):
        t0 = time.perf_counter()
        solve_spectrum(2, half)
        times.append(time.perf_counter() - t0)
    print(f"k=2 spectrum: median {1e3 * np.median(times):.2f} ms")
    assert np.median(times) < 0.010


def test_criterion_2_trace_identity(grid):
    worst = 0.0
    for k, s, states in grid:
        assert len(states) == k + 1
        for st in states:
            r = abs(st.f + s.gamma * st.roots.sum() + k * (s.alpha + s.beta + k - 1))
            worst = max(worst, r / max(1.0, abs(st.f)))
    print(f"worst scaled trace residual {worst:.2e} over {len(grid)} spectra")
    assert worst < 1e-9


def test_criterion_3_oracle_equivalence():
    rng = np.random.default_rng(3)
    worst = 0.0
    t0 = time.perf_counter()
    for d in range(10):
        t, U = rng.uniform(0.1, 5.0, 2)
        k = 4 * (d + 1)
        for nu1 in (0, 1):
            for nu2 in (0, 1):
                p = PhysicalParams(float(t), float(U), nu1, nu2, k)
                states = solve_spectrum(k, to_spectral(p))
                e = np.sort([energy_from_roots(st.roots, p) for st in states])
                o = np.sort(sector_spectrum(p.sector, p.t, p.U))
                worst = max(worst, float(np.max(np.abs(e - o) / np.abs(o))))
    elapsed = time.perf_counter() - t0
    print(f"worst relative deviation {worst:.2e}, {elapsed:.2f} s")
    assert worst < 1e-8
    assert elapsed < 5.0


def test_criterion_4_sector_union():
    rng = np.random.default_rng(4)
    worst = 0.0
    for n in range(0, 81):
        t, U = rng.uniform(-3, 3, 2)
        full = full_spectrum(n, t, U)
        union = union_of_sectors(n, t, U)
        assert full.size == union.size == n + 1
        scale = max(float(np.max(np.abs(full))), 1.0)
        worst = max(worst, float(np.max(np.abs(full - union) / np.maximum(np.abs(full), 1e-12 * scale))))
    print(f"worst relative deviation {worst:.2e}")
    assert worst < 1e-9


def test_criterion_5_bae_residuals(grid):
    worst = max(st.rootset.max_bae_residual for _, _, states in grid for st in states)
    # recompute independently of the solver's own bookkeeping
    for k, s, states in grid[::37]:
        for st in states:
            assert np.max(np.abs(bae_residual(st.roots, s))) == pytest.approx(st.rootset.max_bae_residual)
    print(f"worst BAE residual {worst:.2e}")
    assert worst < 1e-8


def test_criterion_6_jacobi_limit():
    rng = np.random.default_rng(6)
    worst = 0.0
    for k in range(1, 21):
        a, b = rng.uniform(0.2, 3.0, 2)
        states = solve_spectrum(k, SpectralParams(a, b, 1e-6))
        last = states[-1]
        assert last.zeta == k + 1
        assert last.occupation == (0, k)
        worst = max(worst, float(np.max(np.abs(last.roots - jacobi_zeros(k, a - 1, b - 1)))))
    print(f"gamma=1e-6: worst distance to Jacobi zeros {worst:.2e}")
    assert worst < 1e-4
    for k in range(0, 21):
        a, b = rng.uniform(0.2, 3.0, 2)
        pair = classical_limit_pair(k, SpectralParams(a, b, 0.0))
        assert pair.f == -k * (a + b + k - 1)
        assert pair.f == classical_van_vleck(k, a, b)
        J = jacobi_monic(k, a - 1, b - 1).coeffs
        assert np.allclose(pair.b, J, rtol=1e-12, atol=1e-12 * np.max(np.abs(J)))


def test_criterion_7_electrostatics():
    rng = np.random.default_rng(7)
    worst = 0.0
    for k in range(1, 16):
        for s in random_params(rng, 5):
            eqs = all_equilibria(k, s)
            assert len(eqs) == k + 1
            assert sorted(e.occupation for e in eqs) == sorted((k - j, j) for j in range(k + 1))
            assert all(e.grad_norm < 1e-8 for e in eqs)
            assert all(e.hessian_pd for e in eqs)
            roots = [st.roots for st in solve_spectrum(k, s)]
            matched = match_to_roots(eqs, roots)
            assert sorted(i for _, i, _ in matched) == list(range(k + 1))
            worst = max(worst, max(d for _, _, d in matched))
    print(f"worst Hausdorff distance {worst:.2e}")
    assert worst < 1e-6


def test_criterion_8_sum_rules(grid):
    worst = 0.0
    skipped = 0
    for k, s, states in grid:
        for st in states:
            rep = sum_rule_report(st.rootset, st.f, s)
            expect = k >= 2 and bool(np.all(np.abs(st.roots) > 1e-6))
            assert rep.inverse_pairs_applicable == expect
            skipped += not rep.inverse_pairs_applicable
            worst = max(worst, max(rep.scaled().values()))
    print(f"worst scaled sum-rule residual {worst:.2e}; inverse-pair rule skipped {skipped} times")
    assert worst < 1e-8


def test_criterion_9_gradient_identity():
    rng = np.random.default_rng(9)
    worst = 0.0
    n = 0
    while n < 1000:
        k = int(rng.integers(1, 12))
        s = random_params(rng, 1)[0]
        x = np.sort(rng.uniform(-20, 2, k))
        if k > 1 and np.min(np.diff(x)) < 1e-6 or np.min(np.abs(np.abs(x) - 1)) < 1e-6:
            continue
        n += 1
        g = electro_gradient(x, s)
        r = bae_residual(x, s)
        worst = max(worst, float(np.max(np.abs(g + 0.5 * r) / (0.5 * bae_residual_scale(x, s)))))
    print(f"worst relative deviation {worst:.2e}")
    assert worst < 1e-13


@pytest.mark.parametrize("k,limit", [(100, 2.0), (200, 20.0)])
def test_criterion_10_performance(k, limit):
    s = SpectralParams(1.3, 0.8, 0.7)
    job = RunConfig("verify", k, spectral=s)
    run_verify(RunConfig("verify", 5, spectral=s))    # warm up imports and caches
    t0 = time.perf_counter()
    report = run_verify(job)
    elapsed = time.perf_counter() - t0
    print(f"k={k}: spectrum + verification {elapsed:.2f} s")
    assert report.ok, report.first_failure
    assert elapsed < limit
