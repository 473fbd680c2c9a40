"""Full spectrum: Van Vleck eigenpairs, polynomials and their certified roots."""
from dataclasses import dataclass

import numpy as np

from .model import SpectralParams
from .polyroots import RootSet, find_roots
from .recurrence import ESPolynomial, assemble_states, build_f_matrix, van_vleck_spectrum
from .tolerances import DEFAULT


@dataclass(frozen=True, eq=False)
class SolvedState:
    poly: ESPolynomial
    rootset: RootSet

    @property
    def zeta(self):
        return self.poly.zeta

    @property
    def f(self):
        return self.poly.f

    @property
    def roots(self):
        return self.rootset.roots

    @property
    def occupation(self):
        return self.rootset.interval_occupation


def solve_spectrum(k, s: SpectralParams, tol=DEFAULT, method="tridiagonal"):
    """All k+1 states for (k, alpha, beta, gamma), ordered by zeta.

    States are solved in order of decreasing f. Each one seeds the next,
    whose first guess has one fewer root below -1; chambers already matched
    to a state are tried last.
    """
    F = build_f_matrix(k, s)
    polys = assemble_states(van_vleck_spectrum(F, method=method, tol=tol), s, tol)
    out = []
    prev = None
    hint = None
    taken = set()
    for p in polys:
        rs = find_roots(p, previous=prev, occupation_hint=hint, taken=taken, tol=tol)
        out.append(SolvedState(p, rs))
        if k:
            prev = rs.roots
            hint = rs.interval_occupation[0] - 1
            taken.add(rs.interval_occupation[0])
    return out


def trace_identity_residuals(states, s: SpectralParams):
    """|f + gamma sum x + k(alpha+beta+k-1)| / max(1, |f|) per state."""
    out = []
    for st in states:
        k = st.poly.k
        r = st.f + s.gamma * float(np.sum(st.roots)) + k * (s.alpha + s.beta + k - 1)
        out.append(abs(r) / max(1.0, abs(st.f)))
    return np.array(out)
