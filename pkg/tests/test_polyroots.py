import numpy as np
import pytest

from lmgstieltjes.errors import NonRealRoot, RootOnSingularity
from lmgstieltjes.model import SpectralParams
from lmgstieltjes.polyroots import (bae_residual, bae_rounding_floor, coefficients_from_roots, find_roots,
                                    generic_stieltjes_residual, jacobi_backward_errors, log_derivative_residuals,
                                    occupation, ode_residuals, ode_sample_points, polygon_seeds)
from lmgstieltjes.recurrence import ESPolynomial
from lmgstieltjes.spectrum import solve_spectrum
from lmgstieltjes.tolerances import DEFAULT


def test_single_pair_by_quadratic():
    # k = 1: alpha(x+1) + beta(x-1) + gamma(x^2-1) = 0
    a, b, g = 1.3, 0.6, 0.8
    want = np.sort(np.roots([g, a + b, a - b - g]).real)
    got = np.sort([st.roots[0] for st in solve_spectrum(1, SpectralParams(a, b, g))])
    assert np.allclose(got, want, atol=1e-14)


def test_monomial_route():
    roots = [-3.0, -0.2, 0.5]
    p = ESPolynomial.from_coeffs(coefficients_from_roots(roots))
    rs = find_roots(p)
    assert np.allclose(rs.roots, roots, atol=1e-13)
    assert rs.interval_occupation == (1, 2)
    assert np.isnan(rs.max_bae_residual)


def test_complex_pair_rejected():
    with pytest.raises(NonRealRoot):
        find_roots(ESPolynomial.from_coeffs([1.0, 0.0, 1.0]))


def test_coefficients_round_trip():
    x = np.array([-5.0, -1.5, 0.25, 0.75])
    c = coefficients_from_roots(x)
    assert c[-1] == 1.0
    assert np.allclose(np.sort(np.roots(c[::-1]).real), x)


def test_occupation():
    assert occupation([-7.0, -2.0, 0.3]) == (2, 1)
    assert occupation([]) == (0, 0)


def test_residual_forms_agree():
    s = SpectralParams(0.9, 1.4, 0.3)
    x = np.array([-4.0, -0.5, 0.2])
    a = bae_residual(x, s)
    b = generic_stieltjes_residual(x, (1.0, -1.0), (0.9, 1.4), 0.3)
    assert np.allclose(a, b)
    # by hand for the first point
    want = 0.9 / -5.0 + 1.4 / -3.0 + 0.3 + 2 / -3.5 + 2 / -4.2
    assert a[0] == pytest.approx(want)
    with pytest.raises(RootOnSingularity):
        bae_residual([1.0, 0.0], s)


def test_certificate_separates_states():
    s = SpectralParams(1.2, 0.7, 0.9)
    states = solve_spectrum(6, s)
    for i, st in enumerate(states):
        assert np.max(jacobi_backward_errors(st.poly, st.roots)) < DEFAULT.cert_tol
        other = states[(i + 1) % len(states)]
        assert np.max(jacobi_backward_errors(st.poly, other.roots)) > 1e3 * DEFAULT.cert_tol


def test_perturbed_roots_break_equations():
    s = SpectralParams(1.2, 0.7, 0.9)
    st = solve_spectrum(5, s)[2]
    x = st.roots.copy()
    assert np.max(np.abs(bae_residual(x, s))) < 1e-10
    x[1] += 1e-6
    assert np.max(np.abs(bae_residual(x, s))) > 1e-7


def test_ode_residuals_small_for_solutions():
    s = SpectralParams(2.2, 0.4, 1.6)
    for st in solve_spectrum(12, s):
        xs = ode_sample_points(st.roots)
        assert xs.size == 20
        assert np.max(ode_residuals(st.poly, xs)) < 1e-10
        assert np.max(log_derivative_residuals(st.poly, st.rootset)) < 1e-8


def test_ode_residuals_large_for_wrong_polynomial():
    s = SpectralParams(2.2, 0.4, 1.6)
    st = solve_spectrum(4, s)[1]
    c = st.poly.coeffs.copy()
    c[0] *= 1.01
    bad = ESPolynomial.from_coeffs(c, st.f, s)
    assert np.max(ode_residuals(bad, ode_sample_points(st.roots))) > 1e-5


def test_rounding_floor_is_tiny_in_easy_cases():
    s = SpectralParams(1.0, 1.0, 1.0)
    fl = bae_rounding_floor(np.array([-3.0, 0.0]), s)
    assert np.all(fl > 0) and np.all(fl < 1e-14)


def test_polygon_seeds_count():
    z = polygon_seeds(np.array([0.0, -3.0, -1.0, 0.0]))
    assert z.size == 3
    assert np.all(np.isfinite(z))
