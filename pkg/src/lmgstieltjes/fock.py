"""Exact diagonalisation of the two-site boson Hamiltonian.

Two equivalent forms are provided, both real symmetric tridiagonal:

* the site basis |n_c, n - n_c> with hopping -t (c^+ d + d^+ c) and the
  interaction U (n_c^2 + n_d^2);
* the seniority sectors of the a/b (bonding/antibonding) bosons, where the
  interaction couples |n_a, n_b> to |n_a -+ 2, n_b +- 2>.

Neither route shares code with the polynomial solver, so agreement between
the two is a genuine check.
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NoConvergence, ParamOutOfRange
from .model import Sector, sectors_of


@dataclass(frozen=True, eq=False)
class TridiagonalH:
    """Symmetric tridiagonal Hamiltonian with its basis labels (occupation pairs)."""

    diag: np.ndarray
    offdiag: np.ndarray
    basis_labels: list

    @property
    def dim(self):
        return len(self.diag)

    def dense(self):
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def sector_hamiltonian(sec: Sector, t, U) -> TridiagonalH:
    """Hamiltonian of one seniority sector in the pair basis.

    Basis state m has n_a = 2(k - m) + nu1 and n_b = 2m + nu2, so the labels
    run from all pairs in a to all pairs in b.
    """
    k = sec.k
    n = sec.n
    m = np.arange(k + 1)
    na = 2 * (k - m) + sec.nu1
    nb = 2 * m + sec.nu2
    diag = t * (nb - na) + U * n ** 2 - 0.5 * U * (na * (na - 1) + nb * (nb - 1))
    a, b = na[:-1].astype(float), nb[:-1].astype(float)
    off = -0.5 * U * np.sqrt(a * (a - 1) * (b + 1) * (b + 2))
    labels = [(int(x), int(y)) for x, y in zip(na, nb)]
    return TridiagonalH(diag.astype(float), off, labels)


def full_hamiltonian(n, t, U) -> TridiagonalH:
    """Hamiltonian on all n + 1 site-occupation states |n_c, n - n_c>."""
    if int(n) != n or n < 0:
        raise ParamOutOfRange(f"n must be a nonnegative integer, got {n}")
    n = int(n)
    nc = np.arange(n + 1, dtype=float)
    diag = U * (nc ** 2 + (n - nc) ** 2)
    off = -t * np.sqrt((nc[:-1] + 1) * (n - nc[:-1]))
    return TridiagonalH(diag, off, [(int(c), n - int(c)) for c in nc])


def tridiag_eigenvalues(T: TridiagonalH):
    """All eigenvalues, ascending (implicit-shift QL)."""
    w, ok = kernels.tql_eigenvalues(np.asarray(T.diag, dtype=float), np.asarray(T.offdiag, dtype=float))
    if not ok:
        raise NoConvergence("tridiagonal QL iteration did not converge")
    return np.asarray(w)


def sector_spectrum(sec: Sector, t, U):
    return tridiag_eigenvalues(sector_hamiltonian(sec, t, U))


def full_spectrum(n, t, U):
    return tridiag_eigenvalues(full_hamiltonian(n, t, U))


def union_of_sectors(n, t, U):
    """Sorted union of the sector spectra that make up boson number n."""
    return np.sort(np.concatenate([sector_spectrum(s, t, U) for s in sectors_of(n)]))
