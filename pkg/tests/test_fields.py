import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mi_sim import (AIR, WATER, CoilSpec, Excitation, Geometry, dipole_field,
                    simplified_field, wavenumber)

FREQ = 1e6


def test_zero_current_means_zero_field(default_geometry, coil):
    exc = Excitation(coil, 0.0)
    for axis in "xyz":
        h = simplified_field(axis, default_geometry, AIR, WATER, exc, FREQ)
        assert np.all(h.as_array() == 0.0)


@given(st.floats(min_value=0.1, max_value=3.0),
       st.floats(min_value=0.1, max_value=3.0),
       st.floats(min_value=2.0, max_value=500.0))
@settings(max_examples=30, deadline=None)
def test_z_axis_component_ratio(d1, d2, rho):
    """h_z / h_rho of the vertical coil equals k1/k2 for every geometry."""
    exc = Excitation(CoilSpec(0.05, 10, 0.5), 1.0)
    h = simplified_field("z", Geometry(d1, d2, rho), AIR, WATER, exc, FREQ)
    k1 = wavenumber(AIR, FREQ)
    k2 = wavenumber(WATER, FREQ)
    assert h.h_z / h.h_rho == pytest.approx(k1 / k2, rel=1e-12)
    assert h.h_phi == 0.0


def test_vertical_coil_inverse_square_range(excitation):
    """Doubling the range divides each magnitude by exactly 4: the air-side
    phase factor has unit magnitude, so only the 1/d^2 prefactor scales."""
    g1 = Geometry(0.5, 0.3, 10.0)
    g2 = Geometry(0.5, 0.3, 20.0)
    h1 = np.abs(simplified_field("z", g1, AIR, WATER, excitation, FREQ).as_array())
    h2 = np.abs(simplified_field("z", g2, AIR, WATER, excitation, FREQ).as_array())
    mask = h1 > 0
    assert np.allclose(h2[mask] * 4.0, h1[mask], rtol=1e-12)


@given(st.floats(min_value=0.0, max_value=2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_azimuth_structure(phi):
    """Horizontal sources: h_rho tracks cos, h_phi tracks sin of the source
    azimuth, and the y coil is the x coil shifted a quarter turn."""
    exc = Excitation(CoilSpec(0.05, 10, 0.5), 1.0)
    gx = Geometry(0.5, 0.3, 5.0, phi)
    hx = simplified_field("x", gx, AIR, WATER, exc, FREQ)
    hy = simplified_field("y", gx, AIR, WATER, exc, FREQ)
    base = simplified_field("x", Geometry(0.5, 0.3, 5.0, 0.0), AIR, WATER, exc, FREQ)
    assert hx.h_rho == pytest.approx(base.h_rho * np.cos(phi), abs=1e-18)
    assert hx.h_z == pytest.approx(base.h_z * np.cos(phi), abs=1e-18)
    shifted = simplified_field("x", Geometry(0.5, 0.3, 5.0, phi - np.pi / 2),
                               AIR, WATER, exc, FREQ)
    assert hy.h_rho == pytest.approx(shifted.h_rho, rel=1e-12, abs=1e-20)
    assert hy.h_phi == pytest.approx(shifted.h_phi, rel=1e-12, abs=1e-20)


@given(st.floats(min_value=0.1, max_value=8.0),
       st.integers(min_value=1, max_value=40),
       st.floats(min_value=0.01, max_value=0.2))
@settings(max_examples=30, deadline=None)
def test_field_linearity(current, turns, radius):
    """Fields scale linearly in current and turns and with the coil area."""
    g = Geometry(0.5, 0.3, 5.0, 0.3)
    ref = simplified_field("x", g, AIR, WATER,
                           Excitation(CoilSpec(0.05, 10, 0.5), 1.0), FREQ)
    scaled = simplified_field("x", g, AIR, WATER,
                              Excitation(CoilSpec(radius, turns, 0.5), current),
                              FREQ)
    factor = current * (turns / 10.0) * (radius / 0.05) ** 2
    assert np.allclose(scaled.as_array(), ref.as_array() * factor, rtol=1e-12)


def test_simplified_rejects_bad_axis(default_geometry, excitation):
    with pytest.raises(ValueError):
        simplified_field("w", default_geometry, AIR, WATER, excitation, FREQ)


def test_dipole_matches_magnetostatic_limit(excitation):
    """Independent sanity check of the oracle itself: at k r << 1 the dipole
    reduces to the static form (m/4pi) (3 r(r.m) - m)/r^3."""
    medium = AIR
    g = Geometry(0.5, 0.3, 3.0, 0.7)
    h = dipole_field("z", g, medium, excitation, 10.0)  # 10 Hz: kr ~ 1e-6
    moment = excitation.current * excitation.coil.turns * excitation.coil.area
    r_vec = np.array([3.0 * np.cos(0.7), 3.0 * np.sin(0.7), 0.2])
    r = np.linalg.norm(r_vec)
    r_hat = r_vec / r
    m_vec = np.array([0.0, 0.0, moment])
    static = (3 * r_hat * (r_hat @ m_vec) - m_vec) / (4 * np.pi * r**3)
    rho_hat = np.array([np.cos(0.7), np.sin(0.7), 0.0])
    assert complex(h.h_rho) == pytest.approx(static @ rho_hat, rel=1e-4)
    assert complex(h.h_z) == pytest.approx(static[2], rel=1e-4)
