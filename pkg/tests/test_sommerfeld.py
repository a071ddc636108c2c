import numpy as np
import pytest

from mi_sim import (AIR, WATER, CoilSpec, Excitation, Geometry, Medium,
                    QuadratureError, QuadratureSpec, dipole_field, exact_field,
                    exact_field_with_error, two_sided_field)

FREQ = 1e6

# receiver above and below the transmitter, near and far
ORACLE_GRID = [(2.0, 0.5, 0.3), (5.0, 0.5, 0.3), (5.0, 0.3, 0.8),
               (10.0, 1.0, 0.4)]


@pytest.mark.parametrize("rho,d1,d2", ORACLE_GRID)
@pytest.mark.parametrize("axis", ["x", "y", "z"])
def test_homogeneous_reduction_matches_dipole(rho, d1, d2, axis, excitation):
    """With identical media the layered integrals must collapse to the
    unbounded-medium dipole; the oracle predates the quadrature engine."""
    g = Geometry(d1, d2, rho, 0.8)
    h = exact_field(axis, g, WATER, WATER, excitation, FREQ).as_array()
    oracle = dipole_field(axis, g, WATER, excitation, FREQ).as_array()
    scale = np.abs(oracle).max()
    assert np.abs(h - oracle).max() / scale < 1e-2


def test_z_source_has_no_azimuthal_component(default_geometry, excitation):
    h = exact_field("z", default_geometry, AIR, WATER, excitation, FREQ)
    assert h.h_phi == 0.0


def test_exact_field_linearity(default_geometry, excitation):
    base = exact_field("x", default_geometry, AIR, WATER, excitation, FREQ)
    doubled = exact_field("x", default_geometry, AIR, WATER,
                          Excitation(excitation.coil, 2.0), FREQ)
    assert np.allclose(doubled.as_array(), 2.0 * base.as_array(), rtol=1e-12)


def test_exact_field_rejects_close_range(excitation):
    with pytest.raises(ValueError, match="10 coil radii"):
        exact_field("z", Geometry(0.5, 0.3, 0.3), AIR, WATER, excitation, FREQ)


def test_exact_field_rejects_equal_depths(excitation):
    with pytest.raises(ValueError, match="distinct"):
        exact_field("z", Geometry(0.5, 0.5, 5.0), AIR, WATER, excitation, FREQ)


def test_quadrature_failure_carries_estimate(excitation):
    """A tail budget too small to damp the direct-wave spectrum must fail
    loudly and report the achieved error estimate."""
    quad = QuadratureSpec(k_max_factor=2.0, rel_tol=1e-10, max_tail_blocks=1)
    with pytest.raises(QuadratureError) as info:
        exact_field("z", Geometry(0.501, 0.5, 5.0), AIR, WATER, excitation,
                    FREQ, quad)
    assert np.all(np.isfinite(info.value.error_estimate))


def test_halving_tolerance_stays_within_error_estimate(default_geometry,
                                                       excitation):
    for axis in ("x", "z"):
        h1, err = exact_field_with_error(axis, default_geometry, AIR, WATER,
                                         excitation, FREQ,
                                         QuadratureSpec(rel_tol=1e-6))
        h2, _ = exact_field_with_error(axis, default_geometry, AIR, WATER,
                                       excitation, FREQ,
                                       QuadratureSpec(rel_tol=5e-7))
        diff = np.abs(h1.as_array() - h2.as_array())
        assert np.all(diff <= err + 1e-30)


def test_reciprocity_by_swapping_ends(excitation):
    """Swapping depths and turning the bearing around transposes the
    coupling kernel; measured, not enforced."""
    from mi_sim import field_matrix

    fwd = field_matrix(Geometry(0.5, 0.3, 5.0, 0.7), AIR, WATER, excitation,
                       FREQ, "exact")
    back = field_matrix(Geometry(0.3, 0.5, 5.0, 0.7 + np.pi), AIR, WATER,
                        excitation, FREQ, "exact")
    asym = np.linalg.norm(fwd.cartesian - back.cartesian.T)
    rel = asym / np.linalg.norm(fwd.cartesian)
    print(f"reciprocity asymmetry (exact model): {rel:.3e}")
    assert rel < 1e-6


@pytest.mark.slow
def test_fold_against_two_sided_path(excitation):
    """The half-line fold must agree with the original two-sided Hankel
    integrals on a lifted path; both sides use a slightly lossy upper
    medium so every branch point sits off the path."""
    lossy_air = Medium(1.0, 1.0, 2e-5)
    cases = [(2.0, 0.5, 0.3, 0.0), (5.0, 0.5, 0.3, 0.8), (5.0, 0.3, 0.8, 2.0),
             (10.0, 1.0, 0.4, 4.0), (3.0, 2.0, 0.5, 1.0)]
    for rho, d1, d2, phi in cases:
        g = Geometry(d1, d2, rho, phi)
        for axis in ("x", "y", "z"):
            folded = exact_field(axis, g, lossy_air, WATER, excitation,
                                 FREQ).as_array()
            direct = two_sided_field(axis, g, lossy_air, WATER, excitation,
                                     FREQ).as_array()
            scale = np.abs(folded).max()
            assert np.abs(folded - direct).max() / scale < 1e-2


@pytest.mark.slow
def test_lateral_wave_range_slope(excitation):
    """In the regime where both |k2| rho and k1 rho are large, the surface
    path dominates and |h_z| of the vertical coil falls off as 1/rho^2.
    At 1 MHz the 50-200 m window still straddles the quasi-static image
    zone (k1 rho ~ 1), so the slope is checked at 10 MHz."""
    rhos = np.array([50.0, 100.0, 200.0])
    mags = [
        abs(exact_field("z", Geometry(0.5, 0.3, r), AIR, WATER, excitation,
                        1e7).h_z)
        for r in rhos
    ]
    slope = np.polyfit(np.log(rhos), np.log(mags), 1)[0]
    assert slope == pytest.approx(-2.0, abs=0.1)
