"""The compiled kernels and their numpy fallback must agree."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmgstieltjes import _kernels_py, kernels
from lmgstieltjes.jacobi import jacobi_recurrence
from lmgstieltjes.model import SpectralParams
from lmgstieltjes.recurrence import jacobi_to_monomial, van_vleck_tridiagonal
from lmgstieltjes.spectrum import solve_spectrum

compiled = kernels.backends().get("cython")
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")


def _poly(k, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(-0.8, 2.0, 2)
    A, B, _, _ = jacobi_recurrence(k, a, b)
    lc = rng.uniform(-30, 30, k + 1)
    sc = rng.choice([-1.0, 1.0], k + 1)
    return lc, sc, A, B


@given(k=st.integers(1, 40), seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_values_match_monomial_form(k, seed):
    lc, sc, A, B = _poly(k, seed)
    x = np.linspace(-1.5, 1.5, 7)
    ls, y, _, _, ya = _kernels_py.jacobi_values(x, lc, sc, A, B)
    scaled, L = jacobi_to_monomial(lc, sc, A, B)
    ref = np.polynomial.polynomial.polyval(x, scaled) * np.exp(L - ls)
    refabs = np.polynomial.polynomial.polyval(np.abs(x), np.abs(scaled)) * np.exp(L - ls)
    assert np.all(np.abs(y - ref) <= 1e-10 * (ya + refabs))


@needs_compiled
@given(k=st.integers(1, 60), seed=st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_values_backends_agree(k, seed):
    lc, sc, A, B = _poly(k, seed)
    x = np.random.default_rng(seed).uniform(-40, 3, 9)
    p = _kernels_py.jacobi_values(x, lc, sc, A, B)
    c = compiled.jacobi_values(x, lc, sc, A, B)
    # compare at a common log scale
    for u, v in zip(p[1:], c[1:]):
        assert np.allclose(u * np.exp(p[0] - c[0]), v, rtol=1e-11, atol=1e-11 * np.max(np.abs(c[4])))


@needs_compiled
@pytest.mark.parametrize("k", [3, 17, 60])
def test_twisted_vector_backends_agree(k):
    d, sup, sub = van_vleck_tridiagonal(k, SpectralParams(1.3, 0.6, 0.8))
    fs = np.linalg.eigvals(np.diag(d) + np.diag(sup, 1) + np.diag(sub, -1)).real
    for f in fs[:5]:
        lp, sp = _kernels_py.twisted_log_vector(d, sup, sub, f)
        lc, scc = compiled.twisted_log_vector(d, sup, sub, f)
        assert np.allclose(lp, lc, atol=1e-10)
        assert np.array_equal(sp, scc)


@needs_compiled
def test_newton_backends_agree():
    s = SpectralParams(1.3, 0.6, 0.8)
    for k1, x0 in [(2, [-9.0, -3.0, 0.1]), (0, [-0.5, 0.0, 0.5])]:
        xp, _, rp = _kernels_py.bae_newton(np.array(x0), k1, s.alpha, s.beta, s.gamma, 1e-15, 200)
        xc, _, rc = compiled.bae_newton(np.array(x0), k1, s.alpha, s.beta, s.gamma, 1e-15, 200)
        assert np.allclose(xp, xc, rtol=1e-12)
        assert max(rp, rc) < 1e-14


@needs_compiled
def test_aberth_backends_agree():
    lc, sc, A, B = _poly(12, 3)
    z0 = np.exp(1j * np.linspace(0.3, 6.0, 12)) * 2
    zp, _, cp = _kernels_py.aberth_jacobi(z0, lc, sc, A, B, 200, 1e-12)
    zc, _, cc = compiled.aberth_jacobi(z0, lc, sc, A, B, 200, 1e-12)
    assert cp.all() and cc.all()
    key = lambda z: (np.round(z.real, 8), np.round(z.imag, 8))
    assert np.allclose(sorted(zp, key=key), sorted(zc, key=key), atol=1e-9)


@given(n=st.integers(1, 50), seed=st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_ql_eigenvalues(n, seed):
    rng = np.random.default_rng(seed)
    d, e = rng.standard_normal(n), rng.standard_normal(n - 1)
    ref = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    for mod in kernels.backends().values():
        w, ok = mod.tql_eigenvalues(d, e)
        assert ok
        assert np.allclose(np.sort(w), ref, atol=1e-12 * max(1.0, np.max(np.abs(ref))))


@needs_compiled
def test_full_spectrum_same_on_both_backends():
    s = SpectralParams(0.9, 1.7, 0.35)
    with kernels.use_backend("python"):
        assert kernels.BACKEND == "python"
        a = solve_spectrum(15, s)
    with kernels.use_backend("cython"):
        b = solve_spectrum(15, s)
    for u, v in zip(a, b):
        assert u.occupation == v.occupation
        assert np.allclose(u.roots, v.roots, rtol=1e-11)
