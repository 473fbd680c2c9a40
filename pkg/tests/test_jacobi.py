import numpy as np
import pytest
from scipy import special

from lmgstieltjes.errors import ParamOutOfRange
from lmgstieltjes.jacobi import (classical_van_vleck, jacobi_monic, jacobi_ode_residual, jacobi_recurrence,
                                 jacobi_zeros)


@pytest.mark.parametrize("k", [1, 2, 5, 13, 30])
@pytest.mark.parametrize("a,b", [(-0.5, -0.5), (0.5, -0.5), (1.2, 0.3), (-0.8, 2.0)])
def test_zeros_match_scipy(k, a, b):
    ref, _ = special.roots_jacobi(k, a, b)
    assert np.allclose(jacobi_zeros(k, a, b), np.sort(ref), atol=1e-13)


def test_chebyshev_case():
    # a = b = -1/2 is the Chebyshev family, where the generic formulas have 0/0
    k = 7
    want = np.sort(np.cos((2 * np.arange(1, k + 1) - 1) * np.pi / (2 * k)))
    assert np.allclose(jacobi_zeros(k, -0.5, -0.5), want, atol=1e-14)
    A, B, e, g = jacobi_recurrence(k, -0.5, -0.5)
    assert np.all(np.isfinite(A)) and np.all(np.isfinite(g))


@pytest.mark.parametrize("k", [1, 4, 9])
def test_monic_matches_scipy_polynomial(k):
    a, b = 0.7, -0.3
    ref = special.jacobi(k, a, b).coeffs[::-1]
    ref = ref / ref[-1]
    assert np.allclose(jacobi_monic(k, a, b).coeffs, ref, rtol=1e-12, atol=1e-13)


def test_monic_roots_and_ode():
    p = jacobi_monic(8, 1.1, 0.4)
    assert np.allclose(p(jacobi_zeros(8, 1.1, 0.4)), 0, atol=1e-13)
    x = np.linspace(-3, 3, 31)
    scale = np.abs(p(x)) + np.abs(x * x - 1) * 100
    assert np.all(np.abs(jacobi_ode_residual(p, x)) < 1e-11 * scale)


def test_three_term_recurrence_identity():
    k, a, b = 6, 0.2, 1.7
    A, B, _, _ = jacobi_recurrence(k, a, b)
    x = np.linspace(-1.5, 1.5, 9)
    for n in range(1, k):
        lhs = x * jacobi_monic(n, a, b)(x)
        rhs = jacobi_monic(n + 1, a, b)(x) + B[n] * jacobi_monic(n, a, b)(x) + A[n] * jacobi_monic(n - 1, a, b)(x)
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_classical_constant():
    assert classical_van_vleck(3, 0.5, 0.5) == -9.0
    assert classical_van_vleck(0, 2.0, 1.0) == 0.0


def test_bad_exponents():
    with pytest.raises(ParamOutOfRange):
        jacobi_recurrence(3, -1.0, 0.0)
    with pytest.raises(ParamOutOfRange):
        jacobi_monic(-1, 0.0, 0.0)
