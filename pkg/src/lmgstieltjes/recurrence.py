"""Van Vleck eigenproblem for the extended Heine-Stieltjes polynomials.

A degree-k polynomial y = sum_j b_j x^j solves

    (x^2-1) y'' + (alpha(x+1) + beta(x-1) + gamma(x^2-1)) y' + (-gamma k x + f) y = 0

iff F b = f b with the banded matrix F built below. In the monomial basis the
eigenvectors span hundreds of orders of magnitude and their small entries
are lost to rounding. The same operator written in the monic Jacobi basis
pi_n^{(alpha-1, beta-1)} is tridiagonal with positive off-diagonal products,
hence similar to a symmetric tridiagonal matrix. That gives real, simple f
to full accuracy, and the null vectors come from a twisted factorisation in
log-magnitude form.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import kernels
from .errors import ComplexEigenvalue, DegenerateVanVleck, ParamOutOfRange, RecurrenceResidual
from .jacobi import jacobi_recurrence
from .model import SpectralParams
from .tolerances import DEFAULT


@dataclass(frozen=True, eq=False)
class FMatrix:
    """Dense storage of the banded Van Vleck matrix plus the data that built it."""

    k: int
    params: SpectralParams
    entries: np.ndarray

    @property
    def norm(self):
        return float(np.abs(self.entries).sum(axis=1).max()) if self.k else 0.0


def build_f_matrix(k, s: SpectralParams) -> FMatrix:
    """Band matrix F with one sub- and two superdiagonals."""
    if int(k) != k or k < 0:
        raise ParamOutOfRange(f"k must be a nonnegative integer, got {k}")
    k = int(k)
    al, be, ga = s.alpha, s.beta, s.gamma
    j = np.arange(k + 1, dtype=float)
    F = np.diag(-j * (al + be + j - 1))
    if k >= 1:
        F[np.arange(k), np.arange(1, k + 1)] = (j[:-1] + 1) * (be - al + ga)
        F[np.arange(1, k + 1), np.arange(k)] = ga * (k - j[1:] + 1)
    if k >= 2:
        F[np.arange(k - 1), np.arange(2, k + 1)] = (j[:-2] + 2) * (j[:-2] + 1)
    return FMatrix(k, s, F)


def van_vleck_tridiagonal(k, s: SpectralParams):
    """The operator of F in the monic Jacobi basis: ``(diag, sup, sub)``.

    Row m holds the coefficient of pi_m; sup[m] couples pi_{m+1} and sub[m-1]
    couples pi_{m-1}. Both off-diagonals are positive for gamma > 0.
    """
    a, b = s.jacobi_ab
    ga = s.gamma
    A, B, e, g = jacobi_recurrence(k, a, b)
    m = np.arange(k + 1, dtype=float)
    diag = -m * (m + a + b + 1) - ga * ((m - k) * B[: k + 1] + e[: k + 1])
    sup = ga * ((k - m[:-1] - 1) * A[1 : k + 1] - g[1 : k + 1])
    sub = ga * (k - m[1:] + 1)
    return diag, sup, sub


def jacobi_basis_matrix(k, A, B):
    """Row n holds the ascending monomial coefficients of pi_n, n = 0..k."""
    M = np.zeros((k + 1, k + 1))
    M[0, 0] = 1.0
    for n in range(k):
        M[n + 1, 1:] = M[n, :-1]
        M[n + 1] -= B[n] * M[n]
        if n:
            M[n + 1] -= A[n] * M[n - 1]
    return M


def jacobi_to_monomial(lc, sc, A, B, M=None):
    """Monomial coefficients of sum_n sc[n] exp(lc[n]) pi_n.

    Returns ``(scaled, log_scale)`` with max|scaled| = 1 and true
    coefficients ``scaled * exp(log_scale)``. ``M`` is the basis matrix of
    :func:`jacobi_basis_matrix`, built here when not given.
    """
    k = len(lc) - 1
    if M is None:
        M = jacobi_basis_matrix(k, A, B)
    L = float(np.max(lc))
    out = (sc * np.exp(lc - L)) @ M
    m = float(np.max(np.abs(out)))
    return out / m, L + np.log(m)


def monic_from_scaled(scaled, log_scale):
    """Monic coefficients; entries beyond double range become +-inf."""
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        mag = np.log(np.abs(scaled)) + log_scale
        b = np.sign(scaled) * np.exp(mag)
    b[-1] = 1.0
    return b


def jacobi_to_monic(lc, sc, A, B, M=None):
    """Monic coefficients of sum_n sc[n] exp(lc[n]) pi_n, anchored at the top degree.

    Coefficient j only involves c_n with n >= j, so normalising by c_k keeps
    the leading entries exact even when low-degree ones leave double range.
    Those become +-inf (sign from the max-normalised conversion).
    """
    k = len(lc) - 1
    if M is None:
        M = jacobi_basis_matrix(k, A, B)
    with np.errstate(over="ignore", invalid="ignore"):
        c = sc * np.exp(lc - lc[-1])
        big = ~np.isfinite(c)
        out = np.where(big, 0.0, c) @ M
    out[-1] = 1.0
    bad = ~np.isfinite(out)
    if np.any(big):
        # every coefficient up to the largest overflowing degree is out of range
        bad[: np.nonzero(big)[0].max() + 1] = True
    if np.any(bad):
        scaled, ls = jacobi_to_monomial(lc, sc, A, B, M)
        out[bad] = monic_from_scaled(scaled, ls)[bad]
    return out


@dataclass(frozen=True, eq=False)
class VanVleckPair:
    """One eigenpair; unpacks as ``f, b`` with ``b`` the monic coefficients."""

    f: float
    b: np.ndarray
    scaled: np.ndarray
    log_scale: float
    jacobi_log: np.ndarray = None
    jacobi_sign: np.ndarray = None

    def __iter__(self):
        return iter((self.f, self.b))

    def __len__(self):
        return 2

    def __getitem__(self, i):
        return (self.f, self.b)[i]


def _sort_and_check(pairs, F, tol):
    k = F.k
    if k >= 1:
        # descending f, i.e. descending b_{k-1}: the last row of F gives
        # b_{k-1} = (f + k(alpha+beta+k-1))/gamma, and f is the accurate one
        pairs.sort(key=lambda p: -p.f)
        fs = np.array([p.f for p in pairs])
        gaps = np.abs(np.diff(np.sort(fs)))
        if gaps.size and gaps.min() < tol.degeneracy_tol * max(F.norm, 1.0):
            warnings.warn(f"near-degenerate Van Vleck constants (gap {gaps.min():.3e})",
                          DegenerateVanVleck, stacklevel=3)
    return pairs


def van_vleck_spectrum(F: FMatrix, method="tridiagonal", tol=DEFAULT):
    """All k+1 eigenpairs of F, sorted by descending f (equivalently b_{k-1}).

    ``method="tridiagonal"`` (default) works in the Jacobi basis and is
    accurate for any k; ``method="dense"`` runs a general dense eigensolver
    on F itself and is meant for small k cross-checks.
    """
    k = F.k
    if k == 0:
        one = np.ones(1)
        return [VanVleckPair(0.0, one, one, 0.0, np.zeros(1), np.ones(1))]
    if method == "dense":
        return _dense_spectrum(F, tol)
    if method != "tridiagonal":
        raise ParamOutOfRange(f"unknown method {method!r}")
    s = F.params
    if not s.gamma > 0:
        raise ParamOutOfRange("the extended spectrum needs gamma > 0; use the jacobi module at gamma = 0")
    diag, sup, sub = van_vleck_tridiagonal(k, s)
    fs = eigh_tridiagonal(diag, np.sqrt(sup * sub), eigvals_only=True)
    A, B, _, _ = jacobi_recurrence(k, *s.jacobi_ab)
    M = jacobi_basis_matrix(k, A, B)
    pairs = []
    for f in fs:
        lc, sc = kernels.twisted_log_vector(diag, sup, sub, float(f))
        scaled, ls = jacobi_to_monomial(lc, sc, A, B, M)
        pairs.append(VanVleckPair(float(f), jacobi_to_monic(lc, sc, A, B, M), scaled, ls, lc, sc))
    return _sort_and_check(pairs, F, tol)


def _dense_spectrum(F, tol):
    w, V = np.linalg.eig(F.entries)
    norm = max(F.norm, 1.0)
    if np.max(np.abs(w.imag)) > tol.reality_tol * norm:
        raise ComplexEigenvalue(f"eigenvalue with imaginary part {np.max(np.abs(w.imag)):.3e}")
    pairs = []
    for i in range(F.k + 1):
        b = V[:, i].real / V[-1, i].real
        m = np.max(np.abs(b))
        pairs.append(VanVleckPair(float(w[i].real), b, b / m, float(np.log(m))))
    return _sort_and_check(pairs, F, tol)


def classical_limit_pair(k, s: SpectralParams) -> VanVleckPair:
    """The degree-k eigenpair of F at gamma = 0.

    Without the field F is upper triangular, so f is its last diagonal entry
    and the monic eigenvector follows by back substitution. Only this pair
    has a degree-k eigenvector; the other diagonal entries belong to lower
    degrees.
    """
    if s.gamma != 0:
        raise ParamOutOfRange(f"the classical limit needs gamma = 0, got {s.gamma}")
    F = build_f_matrix(k, s).entries
    f = F[k, k]
    b = np.zeros(k + 1)
    b[k] = 1.0
    for i in range(k - 1, -1, -1):
        d = F[i, i] - f
        if d == 0:
            raise DegenerateVanVleck(f"repeated diagonal entry at row {i}")
        b[i] = -(F[i, i + 1:] @ b[i + 1:]) / d
    m = np.max(np.abs(b))
    return VanVleckPair(float(f), b, b / m, float(np.log(m)))


def recurrence_row_residuals(F: FMatrix, f, scaled):
    """Row residuals of (F - f) b divided by norm(F) * max|b| (scale free)."""
    r = F.entries @ scaled - f * scaled
    return np.abs(r) / (max(F.norm, abs(f), 1.0) * np.max(np.abs(scaled)))


@dataclass(frozen=True, eq=False)
class ESPolynomial:
    """A monic extended Heine-Stieltjes polynomial and its Van Vleck constant.

    ``coeffs`` are ascending with b_k = 1 (entries past double range are
    +-inf; ``scaled`` and ``log_scale`` always hold them exactly). When the
    polynomial came from the Jacobi-basis solver, ``jacobi_log`` and
    ``jacobi_sign`` give its coefficients c_n = sign * exp(log) on pi_n.
    """

    coeffs: np.ndarray
    f: float
    zeta: int = 1
    params: SpectralParams = None
    scaled: np.ndarray = None
    log_scale: float = 0.0
    jacobi_log: np.ndarray = None
    jacobi_sign: np.ndarray = None
    row_residual: float = field(default=0.0)

    @property
    def k(self):
        return len(self.coeffs) - 1

    @property
    def overflow(self):
        return not np.all(np.isfinite(self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs, f=0.0, params=None, zeta=1):
        """Wrap plain ascending coefficients (made monic)."""
        c = np.asarray(coeffs, dtype=float)
        c = c / c[-1]
        m = np.max(np.abs(c))
        return cls(c, float(f), zeta, params, c / m, float(np.log(m)))

    @property
    def has_jacobi_form(self):
        return self.jacobi_log is not None and self.params is not None


def assemble_states(pairs, s: SpectralParams, tol=DEFAULT):
    """Package eigenpairs as ESPolynomials with zeta = 1 ... k+1 in the given order."""
    out = []
    F = None
    for z, p in enumerate(pairs, start=1):
        k = len(p.b) - 1
        if F is None:
            F = build_f_matrix(k, s)
        lc, sc = p.jacobi_log, p.jacobi_sign
        if lc is None and k >= 1 and s.gamma > 0:
            diag, sup, sub = van_vleck_tridiagonal(k, s)
            lc, sc = kernels.twisted_log_vector(diag, sup, sub, p.f)
        res = float(np.max(recurrence_row_residuals(F, p.f, p.scaled))) if k else 0.0
        if res > tol.rec_tol:
            raise RecurrenceResidual(f"state zeta={z}: recurrence row residual {res:.3e} exceeds {tol.rec_tol:.1e}")
        out.append(ESPolynomial(p.b, p.f, z, s, p.scaled, p.log_scale, lc, sc, res))
    return out
