import math
import warnings

import mpmath
import numpy as np
import pytest

from tlmodes import oracle
from tlmodes.quantize import (
    KERR_PREFACTOR,
    QuantizedMode,
    check_validity,
    junction_pairs,
    kerr_cross,
    kerr_matrix,
    kerr_self,
)


def test_prefactor_exact_value():
    mpmath.mp.dps = 30
    h = mpmath.mpf("6.62607015e-34")
    e = mpmath.mpf("1.602176634e-19")
    phi0 = h / (2 * e)
    ref = 2 * mpmath.pi**4 * (h / (2 * mpmath.pi)) / phi0**4
    assert KERR_PREFACTOR == pytest.approx(float(ref), rel=1e-9)


def test_zero_point_flux(twoqubit_resonator):
    m = twoqubit_resonator.modes[2]
    q = QuantizedMode.from_mode(m)
    assert q.zero_point_flux == pytest.approx(math.sqrt(1.054571817e-34 / (2 * m.c_sigma * m.omega)), rel=1e-15)


def test_self_kerr_against_fock_diagonalization(twoqubit_resonator):
    res = twoqubit_resonator
    lin = res.nm.lin
    for i in (0, 2):
        m = res.modes[i]
        pairs = junction_pairs(m, lin)
        e = oracle.quartic_fock_diagonalize(m.omega, [p[0] for p in pairs], [p[1] for p in pairs], m.c_sigma)
        assert kerr_self(m, pairs) == pytest.approx(oracle.ladder_kerr(e), rel=1e-3)


def test_cross_kerr_against_fock_matrices(twoqubit_resonator):
    res = twoqubit_resonator
    lin = res.nm.lin
    m1, m3 = res.modes[0], res.modes[2]
    ej = [p[0] for p in junction_pairs(m1, lin)]
    ref = oracle.cross_kerr_first_order([m1.omega, m3.omega], ej, [m1.delta_u, m3.delta_u], m1.c_sigma)
    assert res.kerr.k_cross[0, 2] == pytest.approx(ref, rel=1e-10)
    assert res.kerr.k_cross[0, 2] == pytest.approx(kerr_cross(res.kerr.k_self[0], res.kerr.k_self[2]), rel=1e-15)


def test_twoqubit_kerr_values(twoqubit_resonator):
    km = twoqubit_resonator.kerr
    r = km.ratios()
    assert r[2, 2] == pytest.approx(-3.98e-5, rel=5e-3)
    assert r[0, 0] == pytest.approx(-1.75e-5, rel=5e-3)
    assert km.k_cross[0, 2] == pytest.approx(-1.3808e6, rel=1e-3)
    # modes 2 and 4 leave the junctions unexcited at the symmetric insertion point
    assert abs(r[1, 1]) < 1e-20 and abs(r[3, 3]) < 1e-20


def test_kerr_matrix_structure(twoqubit_resonator):
    km = twoqubit_resonator.kerr
    assert np.allclose(km.k_cross, km.k_cross.T, rtol=1e-15, atol=0)
    assert np.all(km.k_self <= 0)
    np.testing.assert_array_equal(np.diag(km.k_cross), km.k_self)
    np.testing.assert_allclose(km.lamb_shift(), 0.5 * km.k_cross.sum(axis=1), rtol=1e-15)


def test_kerr_matrix_recomputed(twoqubit_resonator):
    res = twoqubit_resonator
    km = kerr_matrix(res.modes, res.nm.lin)
    np.testing.assert_array_equal(km.k_cross, res.kerr.k_cross)


def test_kerr_cross_rejects_positive():
    with pytest.raises(ValueError):
        kerr_cross(1.0, -1.0)
    assert kerr_cross(-4.0, -1.0) == -4.0


def test_validity_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_validity(-1e3, 1e10)
    with pytest.warns(RuntimeWarning):
        assert not check_validity(-1e9, 1e10, photons=2)
