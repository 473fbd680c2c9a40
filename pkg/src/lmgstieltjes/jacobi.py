"""Monic Jacobi polynomials: the gamma = 0 limit of the extended polynomials.

The monic family pi_n = pi_n^{(a,b)} satisfies

    x pi_n = pi_{n+1} + B_n pi_n + A_n pi_{n-1}
    (x^2 - 1) pi_n' = n x pi_n + e_n pi_n + g_n pi_{n-1}

The second identity makes the extended differential operator tridiagonal in
this basis, which is what :mod:`recurrence` exploits.
"""
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.linalg import eigvalsh_tridiagonal

from .errors import ParamOutOfRange


def jacobi_recurrence(k, a, b):
    """Coefficients ``(A, B, e, g)`` of the monic Jacobi identities, length k + 2.

    n = 0 and n = 1 are written out separately: the generic formulas have
    removable 0/0 singularities when a + b = -1 or a + b = 0.
    """
    if not (a > -1 and b > -1):
        raise ParamOutOfRange(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    s = a + b
    size = k + 2
    A = np.zeros(size)
    B = np.empty(size)
    e = np.zeros(size)
    g = np.zeros(size)
    B[0] = (b - a) / (s + 2.0)
    n = np.arange(1, size, dtype=float)
    B[1:] = (b * b - a * a) / ((2 * n + s) * (2 * n + s + 2))
    if size > 1:
        A[1] = 4 * (1 + a) * (1 + b) / ((2 + s) ** 2 * (3 + s))
        g[1] = -4 * (1 + a) * (1 + b) / (2 + s) ** 2
        e[1] = -(a - b) / (2 + s)
    n = np.arange(2, size, dtype=float)
    common = 4 * n * (n + a) * (n + b) * (n + s) / (2 * n + s) ** 2
    A[2:] = common / ((2 * n + s + 1) * (2 * n + s - 1))
    g[2:] = -common / (2 * n + s - 1)
    e[2:] = -n * (a - b) / (2 * n + s)
    return A, B, e, g


@dataclass(frozen=True)
class JacobiPoly:
    """Monic Jacobi polynomial; ``coeffs`` ascending, last entry 1."""

    k: int
    a: float
    b: float
    coeffs: np.ndarray

    @property
    def alpha(self):
        return self.a + 1.0

    @property
    def beta(self):
        return self.b + 1.0

    def __call__(self, x):
        return P.polyval(x, self.coeffs)


def jacobi_monic(k, a, b) -> JacobiPoly:
    """Monic P_k^{(a,b)} built with the three-term recurrence."""
    if int(k) != k or k < 0:
        raise ParamOutOfRange(f"degree must be a nonnegative integer, got {k}")
    k = int(k)
    A, B, _, _ = jacobi_recurrence(k, a, b)
    prev = np.zeros(k + 1)
    cur = np.zeros(k + 1)
    cur[0] = 1.0
    for n in range(k):
        nxt = np.zeros(k + 1)
        nxt[1:] = cur[:-1]
        nxt -= B[n] * cur + A[n] * prev
        prev, cur = cur, nxt
    return JacobiPoly(k, float(a), float(b), cur)


def jacobi_zeros(k, a, b):
    """Zeros of P_k^{(a,b)}, ascending (eigenvalues of the Jacobi matrix)."""
    if k == 0:
        return np.zeros(0)
    A, B, _, _ = jacobi_recurrence(k, a, b)
    return eigvalsh_tridiagonal(B[:k], np.sqrt(A[1:k]))


def jacobi_ode_residual(p: JacobiPoly, x):
    """(x^2-1) y'' + (alpha(x+1) + beta(x-1)) y' - k(k+alpha+beta-1) y at x."""
    x = np.asarray(x, dtype=float)
    c = p.coeffs
    y = P.polyval(x, c)
    y1 = P.polyval(x, P.polyder(c)) if p.k >= 1 else 0.0 * x
    y2 = P.polyval(x, P.polyder(c, 2)) if p.k >= 2 else 0.0 * x
    al, be = p.alpha, p.beta
    return (x * x - 1) * y2 + (al * (x + 1) + be * (x - 1)) * y1 - p.k * (p.k + al + be - 1) * y


def classical_van_vleck(k, alpha, beta):
    """Van Vleck constant of the degree-k state at gamma = 0."""
    return -k * (alpha + beta + k - 1.0)
