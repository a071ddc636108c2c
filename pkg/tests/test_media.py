import numpy as np
import pytest
from hypothesis import given, strategies as st

from mi_sim import (AIR, WATER, Geometry, Medium, reflection_coefficients,
                    vertical_wavenumber, wavenumber)

FREQ = 1e6


def test_air_wavenumber_is_purely_real():
    k = wavenumber(AIR, FREQ)
    assert k.imag == 0.0
    # 2 pi f sqrt(mu0 eps0) = 2 pi f / c
    assert k.real == pytest.approx(0.02095845, abs=1e-7)


def test_water_wavenumber_loss_tangent():
    k = wavenumber(WATER, FREQ)
    assert k.imag > 0.0
    # loss tangent sigma/(omega eps) ~ 22, so Im and Re are comparable
    tangent = WATER.conductivity / (2 * np.pi * FREQ * WATER.permittivity)
    assert tangent == pytest.approx(22.19, abs=0.1)
    assert 0.5 < k.imag / k.real < 1.0


def test_wavenumber_rejects_bad_frequency():
    with pytest.raises(ValueError):
        wavenumber(AIR, 0.0)
    with pytest.raises(ValueError):
        wavenumber(AIR, -1e6)


def test_medium_invariants():
    with pytest.raises(ValueError):
        Medium(relative_permeability=0.0)
    with pytest.raises(ValueError):
        Medium(relative_permittivity=-1.0)
    with pytest.raises(ValueError):
        Medium(conductivity=-0.1)


@given(st.floats(min_value=0.0, max_value=200.0))
def test_vertical_wavenumber_branch(k_rho):
    for medium in (AIR, WATER, Medium(1.0, 20.0, 1.0)):
        k = wavenumber(medium, FREQ)
        assert vertical_wavenumber(k, k_rho).imag >= 0.0


def test_identical_media_do_not_reflect():
    k_rho = np.linspace(0.0, 50.0, 101)
    r_te, r_tm = reflection_coefficients(k_rho, WATER, WATER, FREQ)
    assert np.allclose(r_te, 0.0)
    assert np.allclose(r_tm, 0.0)


def test_normal_incidence_reduction():
    # equal permeabilities at k_rho = 0: R_TE = (k2 - k1)/(k2 + k1)
    k1 = wavenumber(AIR, FREQ)
    k2 = wavenumber(WATER, FREQ)
    r_te, _ = reflection_coefficients(np.array([0.0]), AIR, WATER, FREQ)
    assert r_te[0] == pytest.approx((k2 - k1) / (k2 + k1), rel=1e-12)


def test_air_water_interface_near_total_reflection():
    """|k2| >> |k1| puts both coefficients near magnitude one; the TM one
    lands near -1 and the TE one near +1."""
    r_te, r_tm = reflection_coefficients(np.array([0.0]), AIR, WATER, FREQ)
    assert abs(r_te[0]) > 0.9
    assert abs(r_tm[0]) > 0.9
    assert r_te[0].real > 0.9
    assert r_tm[0].real < -0.9


def test_reflection_against_impedance_oracle():
    """Fresnel coefficients from transverse wave impedances, independently.

    TE: Z_i = omega mu_i / k_iz, r = (Z1 - Z2)/(Z1 + Z2);
    TM: Z_i = k_iz / (omega eps_i), r = (Z2 - Z1)/(Z2 + Z1).
    """
    omega = 2 * np.pi * FREQ
    k_rho = np.linspace(0.0, 30.0, 301)
    k1z = vertical_wavenumber(wavenumber(AIR, FREQ), k_rho)
    k2z = vertical_wavenumber(wavenumber(WATER, FREQ), k_rho)
    z1_te = omega * AIR.permeability / k1z
    z2_te = omega * WATER.permeability / k2z
    z1_tm = k1z / (omega * AIR.complex_permittivity(FREQ))
    z2_tm = k2z / (omega * WATER.complex_permittivity(FREQ))
    r_te, r_tm = reflection_coefficients(k_rho, AIR, WATER, FREQ)
    assert np.allclose(r_te, (z1_te - z2_te) / (z1_te + z2_te), rtol=1e-10)
    assert np.allclose(r_tm, (z2_tm - z1_tm) / (z2_tm + z1_tm), rtol=1e-10)


def test_reflection_magnitudes_bounded():
    k_rho = np.linspace(0.0, 0.9 * abs(wavenumber(AIR, FREQ)), 50)
    r_te, r_tm = reflection_coefficients(k_rho, AIR, WATER, FREQ)
    assert np.all(np.abs(r_te) <= 1.0 + 1e-12)
    assert np.all(np.abs(r_tm) <= 1.0 + 1e-12)


def test_geometry_invariants():
    with pytest.raises(ValueError):
        Geometry(0.0, 0.3, 5.0)
    with pytest.raises(ValueError):
        Geometry(0.5, -0.1, 5.0)
    with pytest.raises(ValueError):
        Geometry(0.5, 0.3, 0.0)
    g = Geometry(0.5, 0.3, 5.0, azimuth=-np.pi)
    assert 0.0 <= g.azimuth < 2 * np.pi
    assert g.azimuth == pytest.approx(np.pi)
