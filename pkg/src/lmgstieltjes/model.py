"""Physical and spectral parameters, boson-number sectors and the energy formula.

The two-site Bose-Hubbard Hamiltonian is described by a hopping ``t``, an
interaction ``U``, the two seniorities ``nu1, nu2`` (unpaired a/b bosons) and
the number ``k`` of pair operators. The polynomial side works with the pole
charges ``alpha`` (pole at +1), ``beta`` (pole at -1) and the constant field
``gamma > 0``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRoute, ParamOutOfRange, RootOnSingularity, UZero
from .tolerances import DEFAULT

HALF_INTEGER_CHARGES = (0.5, 1.5)


@dataclass(frozen=True)
class PhysicalParams:
    """Inputs of the boson Hamiltonian.

    ``U`` may be zero here so that the Fock oracle can be used in that
    limit; :func:`to_spectral` rejects it.
    """

    t: float
    U: float
    nu1: int
    nu2: int
    k: int

    def __post_init__(self):
        if self.nu1 not in (0, 1) or self.nu2 not in (0, 1):
            raise ParamOutOfRange(f"seniorities must be 0 or 1, got ({self.nu1}, {self.nu2})")
        if int(self.k) != self.k or self.k < 0:
            raise ParamOutOfRange(f"k must be a nonnegative integer, got {self.k}")
        if not (np.isfinite(self.t) and np.isfinite(self.U)):
            raise ParamOutOfRange("t and U must be finite")

    @property
    def n(self):
        """Total boson number."""
        return 2 * self.k + self.nu1 + self.nu2

    @property
    def reflected(self):
        """True when t/U < 0, i.e. the spectral variable is x -> -x."""
        return self.t * self.U < 0

    @property
    def sector(self):
        return Sector(self.nu1, self.nu2, self.k)


@dataclass(frozen=True)
class SpectralParams:
    """Pole charges and field of the Bethe equations.

    ``reflected`` records that the physical roots are the negatives of the
    polynomial roots.
    """

    alpha: float
    beta: float
    gamma: float
    reflected: bool = False

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParamOutOfRange(f"alpha and beta must be positive, got ({self.alpha}, {self.beta})")
        if not self.gamma >= 0 or not np.isfinite(self.gamma):
            raise ParamOutOfRange(f"gamma must be finite and nonnegative, got {self.gamma}")

    @property
    def jacobi_ab(self):
        """Jacobi exponents (a, b) = (alpha - 1, beta - 1)."""
        return self.alpha - 1.0, self.beta - 1.0


@dataclass(frozen=True)
class Sector:
    nu1: int
    nu2: int
    k: int

    @property
    def n(self):
        return 2 * self.k + self.nu1 + self.nu2

    @property
    def dim(self):
        return self.k + 1


def to_spectral(p: PhysicalParams) -> SpectralParams:
    """Map Hamiltonian parameters to (alpha, beta, gamma).

    For t/U > 0 the a-boson seniority sits on the pole at -1 and the b-boson
    seniority on the pole at +1: alpha = nu2 + 1/2, beta = nu1 + 1/2,
    gamma = t/U. For t/U < 0 the variable is reflected, which exchanges the
    two charges and flips the field, so gamma = |t/U| and ``reflected`` is set.
    """
    if p.U == 0:
        raise UZero("U = 0: gamma = t/U is undefined")
    if p.t == 0:
        raise DegenerateRoute(
            "t = 0 gives gamma = 0; use jacobi.jacobi_monic(k, alpha - 1, beta - 1) "
            "for the classical limit or fock.sector_hamiltonian for the spectrum")
    g = p.t / p.U
    a_plus = p.nu2 + 0.5
    a_minus = p.nu1 + 0.5
    if g > 0:
        return SpectralParams(a_plus, a_minus, g, False)
    return SpectralParams(a_minus, a_plus, -g, True)


def swap_poles(s: SpectralParams) -> SpectralParams:
    """Apply x -> -x: exchange the charges and toggle the reflection flag."""
    return SpectralParams(s.beta, s.alpha, s.gamma, not s.reflected)


def implied_physical(s: SpectralParams, k: int, U: float = 1.0):
    """Hamiltonian parameters reproducing ``s`` with interaction ``U``.

    Returns None when alpha or beta is not 1/2 or 3/2 (no boson model).
    """
    if s.alpha not in HALF_INTEGER_CHARGES or s.beta not in HALF_INTEGER_CHARGES:
        return None
    a_plus, a_minus = (s.beta, s.alpha) if s.reflected else (s.alpha, s.beta)
    t = s.gamma * U * (-1.0 if s.reflected else 1.0)
    return PhysicalParams(t, U, int(a_minus - 0.5), int(a_plus - 0.5), k)


def sectors_of(n: int):
    """Seniority sectors making up the boson number ``n``."""
    if int(n) != n or n < 0:
        raise ParamOutOfRange(f"n must be a nonnegative integer, got {n}")
    n = int(n)
    if n % 2 == 0:
        out = [Sector(0, 0, n // 2)]
        if n >= 2:
            out.append(Sector(1, 1, (n - 2) // 2))
        return out
    return [Sector(1, 0, (n - 1) // 2), Sector(0, 1, (n - 1) // 2)]


def energy_from_roots(roots, p: PhysicalParams, singular_tol=DEFAULT.singular_tol):
    """Eigen-energy of the state whose polynomial roots are ``roots``.

    ``roots`` are in the spectral variable; when t/U < 0 they are reflected
    back before summation.
    """
    x = np.asarray(roots, dtype=float).reshape(-1)
    if x.size != p.k:
        raise ParamOutOfRange(f"expected {p.k} roots, got {x.size}")
    if x.size and np.min(np.minimum(np.abs(x - 1), np.abs(x + 1))) < singular_tol:
        raise RootOnSingularity("a root lies on one of the poles +-1")
    if p.reflected:
        x = -x
    return 2.0 * p.t * float(np.sum(x)) + p.t * (p.nu2 - p.nu1) + p.U * p.n ** 2
