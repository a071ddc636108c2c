import numpy as np
import pytest

from mi_sim import (AIR, WATER, CoilSpec, Excitation, Geometry, Scenario,
                    field_matrix, scenario_field_matrix)

FREQ = 1e6


@pytest.fixture(scope="session")
def coil():
    return CoilSpec(0.05, 10, 0.5)


@pytest.fixture(scope="session")
def excitation(coil):
    return Excitation(coil, 1.0)


@pytest.fixture(scope="session")
def default_geometry():
    return Geometry(tx_depth=0.5, rx_depth=0.3, horizontal_range=5.0, azimuth=0.0)


@pytest.fixture(scope="session")
def default_scenario():
    return Scenario()


@pytest.fixture(scope="session")
def fm_simplified(default_scenario):
    return scenario_field_matrix(default_scenario)


@pytest.fixture(scope="session")
def fm_exact(default_geometry, excitation):
    return field_matrix(default_geometry, AIR, WATER, excitation, FREQ, "exact")


def haar_frames(rng, count):
    """Batched Haar frames for bulk statistics (QR with sign fix)."""
    a = rng.standard_normal((count, 3, 3))
    q, r = np.linalg.qr(a)
    return q * np.sign(np.einsum("nii->ni", r))[:, None, :]
