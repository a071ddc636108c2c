"""Invariant self-checks behind `mi-sim validate`.

Each check is fast, deterministic, and independent of the test suite so a
deployed install can prove its own numerical sanity.
"""

from __future__ import annotations

import numpy as np

from .coupling import coupling_matrix, frame_rng, random_frame
from .estimation import (estimate_mii, estimation_error,
                         orthogonal_pilot_currents, simulate_measurement)
from .experiments import scenario_field_matrix
from .fields import Excitation, dipole_field
from .media import Geometry, Medium, vertical_wavenumber, wavenumber
from .multiuser import cross_leakage, nullspace_precoders
from .scenario import Scenario
from .sommerfeld import exact_field
from .strategies import waterfill


def _check_branch_rule():
    k_rho = np.linspace(0.0, 100.0, 4001)
    worst = 0.0
    for medium in (Medium(1, 1, 0.0), Medium(1, 81, 0.1), Medium(1, 20, 1.0)):
        k = wavenumber(medium, 1e6)
        worst = min(worst, float(vertical_wavenumber(k, k_rho).imag.min()))
    return worst >= 0.0, f"min Im(k_z) = {worst:.3g}"


def _check_homogeneous_reduction():
    water = Medium(1.0, 81.0, 0.1)
    scenario = Scenario()
    exc = Excitation(scenario.coil, 1.0)
    geometry = Geometry(0.5, 0.3, 5.0, 0.4)
    worst = 0.0
    for axis in ("x", "y", "z"):
        h = exact_field(axis, geometry, water, water, exc, scenario.frequency)
        oracle = dipole_field(axis, geometry, water, exc, scenario.frequency)
        scale = np.abs(oracle.as_array()).max()
        worst = max(worst, float(
            np.abs(h.as_array() - oracle.as_array()).max() / scale))
    return worst < 1e-2, f"max relative deviation from dipole = {worst:.3g}"


def _check_frobenius_invariance():
    scenario = Scenario()
    fm = scenario_field_matrix(scenario)
    norms = []
    for d in range(200):
        rng = frame_rng(123, d)
        m = coupling_matrix(random_frame(rng), random_frame(rng), fm,
                            scenario.coil)
        norms.append(np.linalg.norm(m))
    spread = (max(norms) - min(norms)) / max(norms)
    return spread < 1e-10, f"relative spread over 200 frames = {spread:.3g}"


def _check_waterfill_kkt():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        gains = rng.uniform(0.0, 5.0, size=3)
        if not np.any(gains > 0):
            continue
        p = waterfill(gains, 2.0)
        worst = max(worst, abs(p.sum() - 2.0))
        active = p > 0
        if active.any():
            levels = p[active] + 1.0 / gains[active]
            worst = max(worst, float(np.ptp(levels)))
            if (~active).any() and gains[~active].max() > 0:
                if 1.0 / gains[~active].min() < levels.max() - 1e-9:
                    worst = max(worst, 1.0)
    return worst < 1e-9, f"max KKT violation = {worst:.3g}"


def _check_pilot_roundtrip():
    scenario = Scenario()
    fm = scenario_field_matrix(scenario)
    rng = frame_rng(99, 0)
    m = coupling_matrix(random_frame(rng), random_frame(rng), fm, scenario.coil)
    pilots = orthogonal_pilot_currents(1.0, scenario.coil.resistance, seed=5)
    meas = simulate_measurement([m], pilots, scenario.angular_frequency,
                                scenario.coil.resistance, 0.0, seed=6)
    m_hat = estimate_mii(meas, pilots, scenario.coil.resistance,
                         scenario.angular_frequency)[0]
    err = estimation_error(m, m_hat)
    return err < 1e-10, f"noiseless round-trip error = {err:.3g}"


def _check_nullspace_leakage():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(200):
        rows = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        ps = nullspace_precoders(rows, 1.0)
        leak = cross_leakage(ps)
        worst = max(worst, float(leak.max()))
    return worst < 1e-10, f"max cross-user leakage = {worst:.3g}"


def _check_reciprocity():
    scenario = Scenario()
    exc = Excitation(scenario.coil, 1.0)
    forward = Geometry(0.5, 0.3, 5.0, 0.7)
    backward = Geometry(0.3, 0.5, 5.0, 0.7 + np.pi)
    from .field_matrix import field_matrix

    fm_f = field_matrix(forward, scenario.air, scenario.water, exc,
                        scenario.frequency, "exact")
    fm_b = field_matrix(backward, scenario.air, scenario.water, exc,
                        scenario.frequency, "exact")
    asym = np.linalg.norm(fm_f.cartesian - fm_b.cartesian.T) / np.linalg.norm(
        fm_f.cartesian)
    return asym < 1e-3, f"exact-model reciprocity asymmetry = {asym:.3g}"


def run_all_checks():
    """Yield (name, passed, detail) for every invariant check."""
    checks = (
        ("vertical wavenumber branch", _check_branch_rule),
        ("homogeneous dipole reduction", _check_homogeneous_reduction),
        ("coupling Frobenius invariance", _check_frobenius_invariance),
        ("water-filling KKT conditions", _check_waterfill_kkt),
        ("pilot estimation round-trip", _check_pilot_roundtrip),
        ("nullspace precoder leakage", _check_nullspace_leakage),
        ("field reciprocity", _check_reciprocity),
    )
    for name, fn in checks:
        try:
            passed, detail = fn()
        except Exception as exc:
            passed, detail = False, f"raised {exc!r}"
        yield name, passed, detail
