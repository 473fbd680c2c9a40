"""Zeros of extended Heine-Stieltjes polynomials and Bethe-equation residuals.

Root finding for polynomials that carry their Jacobi-basis representation
runs in three stages:

1. Aberth-Ehrlich iteration evaluated through the Jacobi recurrence, seeded
   from a Newton polygon of the coefficient magnitudes (or from the
   neighbouring state of the same spectrum).
2. Damped Newton on the Bethe equations restricted to one ordered chamber
   (k1 roots below -1, k2 in (-1, 1)). The equilibrium of each chamber is
   unique, and this stage recovers the far zeros that are too ill
   conditioned for any coefficient representation.
3. A certificate: the refined points must be zeros of the *given*
   polynomial, i.e. |p(x)| <= cert_tol * sum_n |c_n||pi_n(x)|.

Plain coefficient vectors without that representation use companion-matrix
seeds, Aberth iteration and Newton polish on the monomial form.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import kernels
from .errors import NoConvergence, NonRealRoot, ParamOutOfRange, PoleCollision, RootOnSingularity
from .jacobi import jacobi_recurrence
from .model import SpectralParams
from .recurrence import ESPolynomial
from .tolerances import DEFAULT

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class RootSet:
    """Ascending real roots with their diagnostics."""

    roots: np.ndarray
    max_bae_residual: float
    interval_occupation: tuple
    backward_error: float = float("nan")
    iterations: int = 0

    @property
    def k(self):
        return len(self.roots)

    @property
    def support_ok(self):
        """All roots in (-inf, -1) U (-1, 1)."""
        return sum(self.interval_occupation) == self.k


def occupation(roots):
    x = np.asarray(roots)
    return int(np.sum(x < -1)), int(np.sum((x > -1) & (x < 1)))


def eval_with_derivatives(poly, x):
    """(y, y', y'') by simultaneous nested multiplication on the monic coefficients."""
    c = poly.coeffs if isinstance(poly, ESPolynomial) else np.asarray(poly, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.full_like(x, c[-1])
    y1 = np.zeros_like(x)
    y2 = np.zeros_like(x)
    for cj in c[-2::-1]:
        y2 = y2 * x + y1
        y1 = y1 * x + y
        y = y * x + cj
    return y, y1, 2.0 * y2


def _check_poles(x, singular_tol):
    if x.size and np.min(np.minimum(np.abs(x - 1.0), np.abs(x + 1.0))) < singular_tol:
        raise RootOnSingularity("a root lies within singular_tol of +-1")


def generic_stieltjes_residual(roots, poles, charges, field=0.0):
    """r_i = sum_{j!=i} 2/(x_i-x_j) + sum_mu charge_mu/(x_i-pole_mu) + field."""
    x = np.asarray(roots, dtype=float).reshape(-1)
    a = np.asarray(poles, dtype=float).reshape(-1)
    q = np.asarray(charges, dtype=float).reshape(-1)
    if a.size != q.size:
        raise ParamOutOfRange("poles and charges differ in length")
    if np.unique(a).size != a.size:
        raise PoleCollision("poles must be distinct")
    if x.size == 0:
        return np.zeros(0)
    dpole = x[:, None] - a[None, :]
    if np.any(dpole == 0):
        raise RootOnSingularity("a root coincides with a pole")
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    if np.any(D == 0):
        raise RootOnSingularity("roots are not simple")
    return 2.0 * (1.0 / D).sum(axis=1) + (q[None, :] / dpole).sum(axis=1) + field


def bae_residual(rs, s: SpectralParams, singular_tol=DEFAULT.singular_tol):
    """alpha/(x_i-1) + beta/(x_i+1) + gamma + sum_{j!=i} 2/(x_i-x_j)."""
    x = np.asarray(rs.roots if isinstance(rs, RootSet) else rs, dtype=float).reshape(-1)
    _check_poles(x, singular_tol)
    return generic_stieltjes_residual(x, (1.0, -1.0), (s.alpha, s.beta), s.gamma)


def bae_residual_scale(x, s: SpectralParams):
    """Sum of the absolute values of the terms of each Bethe residual."""
    x = np.asarray(x, dtype=float)
    D = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(D, np.inf)
    return s.alpha / np.abs(x - 1) + s.beta / np.abs(x + 1) + s.gamma + 2.0 * (1.0 / D).sum(axis=1)


def bae_rounding_floor(x, s: SpectralParams):
    """Residual that rounding the roots to double precision alone can cause.

    First-order bound eps * sum_j |dr_i/dx_j| |x_j|. Near the poles or in
    tight clusters it exceeds any fixed absolute tolerance.
    """
    x = np.asarray(x, dtype=float)
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    pair = 2.0 / D ** 2
    own = s.alpha / (x - 1) ** 2 + s.beta / (x + 1) ** 2 + pair.sum(axis=1)
    return _EPS * (own * np.abs(x) + pair @ np.abs(x))


def coefficients_from_roots(roots):
    """Ascending monic coefficients of prod (x - x_i)."""
    x = np.asarray(roots, dtype=float).reshape(-1)
    if x.size == 0:
        return np.ones(1)
    return npoly.polyfromroots(x)


# --- Jacobi-basis route -----------------------------------------------------

def _jacobi_data(poly):
    a, b = poly.params.jacobi_ab
    A, B, _, _ = jacobi_recurrence(poly.k, a, b)
    return poly.jacobi_log, poly.jacobi_sign, A, B


def polygon_seeds(logmag):
    """Starting points on circles from the upper convex hull of (n, log|c_n|)."""
    n = len(logmag) - 1
    hull = []
    for j in range(n + 1):
        while len(hull) >= 2:
            j1, j2 = hull[-2], hull[-1]
            if (logmag[j2] - logmag[j1]) * (j - j1) <= (logmag[j] - logmag[j1]) * (j2 - j1):
                hull.pop()
            else:
                break
        hull.append(j)
    z = []
    for lo, hi in zip(hull[:-1], hull[1:]):
        m = hi - lo
        r = np.exp((logmag[lo] - logmag[hi]) / m)
        ang = 2 * np.pi * np.arange(m) / m + np.pi / (2 * m) + 0.4
        z.extend(r * np.exp(1j * ang))
    return np.array(z, dtype=complex)


def _continuation_seeds(previous):
    """Aberth start from the neighbouring state: one far root moves inside."""
    x = np.sort(np.asarray(previous, dtype=float))
    if not np.any(x < -1):
        return None
    x = list(x[1:])
    inner = np.array([-1.0] + [v for v in x if v > -1] + [1.0])
    gap = int(np.argmax(np.diff(inner)))
    x.append(0.5 * (inner[gap] + inner[gap + 1]))
    x = np.sort(np.array(x))
    wobble = 1e-3 * (1 + np.abs(x)) * np.where(np.arange(x.size) % 2, 1.0, -1.0)
    return x + 1j * wobble


def _chamber_seed(z, k1, previous=None):
    """Real, ordered starting point with exactly k1 entries below -1."""
    x = np.sort(z.real)
    k = x.size
    out = x[:k1].copy()
    inner = x[k1:].copy()
    if previous is not None:
        pout = np.sort(np.asarray(previous))
        pout = pout[pout < -1]
        if pout.size == k1 + 1:
            out = pout[:-1].copy()
        elif pout.size == k1:
            out = pout.copy()
    if k1:
        out = np.minimum(out, -1 - 1e-3)
        for i in range(k1 - 2, -1, -1):
            out[i] = min(out[i], out[i + 1] - 1e-3 * max(1.0, abs(out[i + 1])))
    k2 = k - k1
    if k2:
        inner = np.clip(np.sort(inner), -1 + 1e-6, 1 - 1e-6)
        if np.any(np.diff(inner) <= 1e-9):
            inner = np.cos(np.pi * (np.arange(k2, 0, -1) - 0.5) / k2)
    return np.concatenate([out, inner])


def jacobi_backward_errors(poly, x):
    """|p(x_i)| / sum_n |c_n||pi_n(x_i)| for each point."""
    lc, sc, A, B = _jacobi_data(poly)
    _, y, _, _, ya = kernels.jacobi_values(np.asarray(x, dtype=float), lc, sc, A, B)
    return np.abs(y) / ya


def _candidate_chambers(k, z, hint, taken=()):
    """Chambers (as k1) to try: the hint, then free ones near the Aberth estimate.

    ``taken`` holds chambers already matched to other states; they are
    tried last rather than excluded, so a repeated chamber is still found
    (and then exposed by the occupation check) instead of being assumed away.
    """
    inner = int(np.sum((np.abs(z.real) < 1) & (np.abs(z.imag) < 1e-3)))
    est = k - inner
    taken = set(taken)
    order = [hint] if hint is not None and 0 <= hint <= k and hint not in taken else []
    rest = sorted((c for c in range(k + 1) if c not in order), key=lambda c: (c in taken, abs(c - est)))
    return order + rest


def _roots_jacobi(poly, previous, hint, taken, tol):
    k = poly.k
    s = poly.params
    lc, sc, A, B = _jacobi_data(poly)
    z0 = _continuation_seeds(previous) if previous is not None else None
    if z0 is None:
        z0 = polygon_seeds(lc)
    z, its, _ = kernels.aberth_jacobi(z0, lc, sc, A, B, tol.max_iters, 4.0 * k * _EPS)
    best = None
    for k1 in _candidate_chambers(k, z, hint, taken):
        x0 = _chamber_seed(z, k1, previous)
        x, nit, _ = kernels.bae_newton(x0, k1, s.alpha, s.beta, s.gamma, 4 * _EPS, tol.max_iters)
        bw = float(np.max(jacobi_backward_errors(poly, x)))
        if best is None or bw < best[1]:
            best = (x, bw, its + nit)
        if bw <= tol.cert_tol:
            break
    x, bw, nit = best
    if not bw <= tol.cert_tol:
        raise NoConvergence(
            f"state zeta={poly.zeta}: no ordered chamber gives zeros of the polynomial "
            f"(best backward error {bw:.3e})")
    return x, bw, nit


# --- monomial route ---------------------------------------------------------

def _roots_monomial(poly, tol):
    c = poly.coeffs
    k = len(c) - 1
    comp = np.zeros((k, k))
    comp[1:, :-1] = np.eye(k - 1)
    comp[:, -1] = -c[:-1]
    z = np.linalg.eigvals(comp).astype(complex)
    absc = np.abs(c)
    its = 0
    conv = np.zeros(k, dtype=bool)
    for its in range(1, tol.max_iters + 1):
        p = npoly.polyval(z, c)
        dp = npoly.polyval(z, npoly.polyder(c))
        N = p / dp
        D = z[:, None] - z[None, :]
        np.fill_diagonal(D, np.inf)
        w = N / (1 - N * (1.0 / D).sum(axis=1))
        w[conv | ~np.isfinite(w)] = 0
        z = z - w
        scale = npoly.polyval(np.abs(z), absc)
        conv |= (np.abs(w) <= 4 * _EPS * np.abs(z)) | (np.abs(p) <= 4 * k * _EPS * scale)
        if conv.all():
            break
    # Newton polish with exact derivatives
    for _ in range(3):
        p = npoly.polyval(z, c)
        dp = npoly.polyval(z, npoly.polyder(c))
        ok = dp != 0
        z[ok] -= p[ok] / dp[ok]
    if np.any(np.abs(z.imag) > tol.reality_tol * np.maximum(1.0, np.abs(z))):
        raise NonRealRoot(f"root with imaginary part {np.max(np.abs(z.imag)):.3e}")
    x = np.sort(z.real)
    bw = float(np.max(np.abs(npoly.polyval(x, c)) / npoly.polyval(np.abs(x), absc)))
    return x, bw, its


def find_roots(poly: ESPolynomial, previous=None, occupation_hint=None, taken=(), tol=DEFAULT) -> RootSet:
    """All k real roots of ``poly``, ascending.

    ``previous`` (roots of the neighbouring state of the same spectrum),
    ``occupation_hint`` (expected number of roots below -1) and ``taken``
    (chambers already used by other states) only steer the search;
    acceptance always rests on the polynomial certificate.
    """
    k = poly.k
    if k == 0:
        return RootSet(np.zeros(0), 0.0, (0, 0), 0.0, 0)
    if poly.has_jacobi_form:
        x, bw, its = _roots_jacobi(poly, previous, occupation_hint, taken, tol)
    else:
        x, bw, its = _roots_monomial(poly, tol)
    x = np.sort(x)
    if poly.params is not None:
        _check_poles(x, tol.singular_tol)
        r = float(np.max(np.abs(bae_residual(x, poly.params, tol.singular_tol))))
    else:
        r = float("nan")
    # gaps are judged against the size of the neighbouring roots, not the
    # overall spread, which is huge when a few roots run off towards -1/gamma
    local = np.maximum(1.0, np.maximum(np.abs(x[1:]), np.abs(x[:-1])))
    if k > 1 and np.min(np.diff(x) / local) <= tol.simplicity_tol:
        raise NoConvergence(f"state zeta={poly.zeta}: roots are not simple")
    return RootSet(x, r, occupation(x), bw, its)


# --- diagnostics ------------------------------------------------------------

def poly_values(poly: ESPolynomial, x):
    """(y, y', y'', term scale) at x, each up to a common positive factor per point."""
    x = np.asarray(x, dtype=float)
    if poly.has_jacobi_form:
        lc, sc, A, B = _jacobi_data(poly)
        _, y, y1, y2, ya = kernels.jacobi_values(x, lc, sc, A, B)
        return y, y1, y2, ya
    c = poly.scaled
    y, y1, y2 = eval_with_derivatives(c, x)
    return y, y1, y2, npoly.polyval(np.abs(x), np.abs(c))


def log_derivative_residuals(poly: ESPolynomial, rs: RootSet):
    """|y''/y' - sum_{j!=i} 2/(x_i-x_j)| relative to the larger of the two terms."""
    x = rs.roots
    _, y1, y2, _ = poly_values(poly, x)
    D = x[:, None] - x[None, :]
    np.fill_diagonal(D, np.inf)
    pair = 2.0 * (1.0 / D).sum(axis=1)
    scale = np.maximum(np.abs(pair), np.abs(2.0 / D).sum(axis=1))
    return np.abs(y2 / y1 - pair) / scale


def ode_sample_points(roots, n=20):
    """n points spread over the root range, away from the roots and from +-1."""
    x = np.asarray(roots, dtype=float)
    lo = min(float(x.min()) if x.size else -2.0, -2.0) - 1.0
    hi = 2.0
    t = np.cos(np.pi * (np.arange(n) + 0.5) / n)
    pts = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t
    avoid = np.concatenate([x, [-1.0, 1.0]])
    for i in range(n):
        for _ in range(50):
            d = np.abs(avoid - pts[i])
            j = int(np.argmin(d))
            near = max(1e-3 * max(1.0, abs(avoid[j])), 1e-6)
            if d[j] > near:
                break
            pts[i] += 3 * near
    return np.sort(pts)


def _jacobi_sums(lc, sc, A, B, x):
    """Values and absolute sums of y, y', y'' from Jacobi coefficients.

    ``lc``, ``sc`` have shape (m, k+1) (one row per polynomial) and ``x``
    shape (m, p). Returns ``(S, T)`` with S[j] = sum_n c_n pi_n^(j)(x) and
    T[j] = sum_n |c_n||pi_n^(j)(x)|, both divided by the same positive factor
    per point. The basis values and the partial sums carry separate
    per-point log scales, so neither tiny c_n nor huge pi_n(x) is lost.
    """
    k = lc.shape[1] - 1
    one, zero = np.ones_like(x), np.zeros_like(x)
    prev = [zero, zero, zero]
    cur = [one, zero.copy(), zero.copy()]
    lam = zero.copy()                       # basis values are cur * exp(lam)
    mu = np.broadcast_to(lc[:, :1], x.shape).copy()   # sums are S * exp(mu)
    S = [sc[:, :1] * one, zero.copy(), zero.copy()]
    T = [one.copy(), zero.copy(), zero.copy()]
    for n in range(k):
        # x pi_n = pi_{n+1} + B_n pi_n + A_n pi_{n-1}, differentiated twice
        xb = x - B[n]
        p0 = xb * cur[0] - A[n] * prev[0]
        p1 = xb * cur[1] + cur[0] - A[n] * prev[1]
        p2 = xb * cur[2] + 2 * cur[1] - A[n] * prev[2]
        prev, cur = cur, [p0, p1, p2]
        big = np.maximum(np.maximum(np.abs(p0), np.abs(p1)), np.abs(p2))
        if np.any(big > 1e100):
            g = np.where(big > 1e100, big, 1.0)
            prev = [v / g for v in prev]
            cur = [v / g for v in cur]
            lam = lam + np.log(g)
        e = lc[:, n + 1 : n + 2] + lam
        up = e > mu
        if np.any(up):
            shrink = np.exp(np.where(up, mu - e, 0.0))
            S = [v * shrink for v in S]
            T = [v * shrink for v in T]
            mu = np.where(up, e, mu)
        w = np.exp(e - mu)
        sw = sc[:, n + 1 : n + 2] * w
        for j in range(3):
            S[j] += sw * cur[j]
            T[j] += w * np.abs(cur[j])
    return S, T


def ode_residuals_many(polys, xs):
    """:func:`ode_residuals` for several polynomials of one spectrum, batched.

    ``xs`` holds one row of sample points per polynomial.
    """
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if not polys:
        return np.zeros((0, xs.shape[1]))
    p0 = polys[0]
    s, k = p0.params, p0.k
    fs = np.array([p.f for p in polys])[:, None]
    if all(p.has_jacobi_form for p in polys):
        lc = np.array([p.jacobi_log for p in polys])
        sc = np.array([p.jacobi_sign for p in polys])
        _, _, A, B = _jacobi_data(p0)
        (y, y1, y2), (a0, a1, a2) = _jacobi_sums(lc, sc, A, B, xs)
    else:
        rows = []
        for p, x in zip(polys, xs):
            c = p.scaled
            rows.append(eval_with_derivatives(c, x) + eval_with_derivatives(np.abs(c), np.abs(x)))
        y, y1, y2, a0, a1, a2 = (np.array(v) for v in zip(*rows))
    q2 = xs * xs - 1
    q1 = s.alpha * (xs + 1) + s.beta * (xs - 1) + s.gamma * (xs * xs - 1)
    q0 = -s.gamma * k * xs + fs
    scale = np.abs(q2) * a2 + np.abs(q1) * a1 + np.abs(q0) * a0
    r = q2 * y2 + q1 * y1 + q0 * y
    return np.abs(r) / np.where(scale > 0, scale, 1.0)


def ode_residuals(poly: ESPolynomial, x):
    """Cleared differential-equation residual at x, relative to the polynomial scale.

    The scale is what rounding of the coefficients can produce: each of the
    three terms weighted by the sums of |coefficient| x |basis function|.
    """
    return ode_residuals_many([poly], np.asarray(x, dtype=float)[None, :])[0]
