import numpy as np
import pytest

from lmgstieltjes.errors import DegenerateRoute, ParamOutOfRange, RootOnSingularity, UZero
from lmgstieltjes.fock import sector_spectrum
from lmgstieltjes.model import (PhysicalParams, Sector, SpectralParams, energy_from_roots, implied_physical,
                                sectors_of, swap_poles, to_spectral)
from lmgstieltjes.spectrum import solve_spectrum


def test_positive_ratio_map():
    s = to_spectral(PhysicalParams(0.6, 2.0, 0, 1, 3))
    assert (s.alpha, s.beta, s.gamma, s.reflected) == (1.5, 0.5, 0.3, False)


def test_negative_ratio_reflects():
    s = to_spectral(PhysicalParams(-0.6, 2.0, 0, 1, 3))
    assert (s.alpha, s.beta, s.reflected) == (0.5, 1.5, True)
    assert s.gamma == pytest.approx(0.3)


def test_route_errors():
    with pytest.raises(UZero):
        to_spectral(PhysicalParams(1.0, 0.0, 0, 0, 2))
    with pytest.raises(DegenerateRoute):
        to_spectral(PhysicalParams(0.0, 1.0, 0, 0, 2))
    with pytest.raises(ParamOutOfRange):
        PhysicalParams(1.0, 1.0, 2, 0, 2)
    with pytest.raises(ParamOutOfRange):
        PhysicalParams(1.0, 1.0, 0, 0, -1)
    with pytest.raises(ParamOutOfRange):
        SpectralParams(0.0, 1.0, 1.0)
    with pytest.raises(ParamOutOfRange):
        SpectralParams(1.0, 1.0, -0.5)


def test_sectors_cover_boson_number():
    assert sectors_of(0) == [Sector(0, 0, 0)]
    assert sectors_of(4) == [Sector(0, 0, 2), Sector(1, 1, 1)]
    assert sectors_of(5) == [Sector(1, 0, 2), Sector(0, 1, 2)]
    for n in range(30):
        secs = sectors_of(n)
        assert all(s.n == n for s in secs)
        assert sum(s.dim for s in secs) == n + 1


def test_energy_formula_by_hand():
    # n = 3: 2 t x + t (nu2 - nu1) + U n^2 = -6 + 1 + 18
    p = PhysicalParams(1.0, 2.0, 0, 1, 1)
    assert energy_from_roots([-3.0], p) == pytest.approx(13.0)
    with pytest.raises(RootOnSingularity):
        energy_from_roots([1.0], p)
    with pytest.raises(ParamOutOfRange):
        energy_from_roots([0.1, 0.2], p)


def test_implied_physical_round_trip():
    for t in (0.7, -0.7):
        p = PhysicalParams(t, 1.0, 1, 0, 4)
        q = implied_physical(to_spectral(p), 4)
        assert (q.nu1, q.nu2, q.k) == (1, 0, 4)
        assert q.t / q.U == pytest.approx(t)
    assert implied_physical(SpectralParams(1.3, 0.5, 1.0), 2) is None


def test_swap_poles():
    s = swap_poles(SpectralParams(1.5, 0.5, 0.2))
    assert (s.alpha, s.beta, s.gamma, s.reflected) == (0.5, 1.5, 0.2, True)


@pytest.mark.parametrize("t", [0.4, -0.4])
@pytest.mark.parametrize("nu1,nu2", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_energies_match_fock_both_signs(t, nu1, nu2):
    p = PhysicalParams(t, 1.3, nu1, nu2, 6)
    e = np.sort([energy_from_roots(st.roots, p) for st in solve_spectrum(6, to_spectral(p))])
    assert np.allclose(e, sector_spectrum(p.sector, p.t, p.U), rtol=1e-10)
