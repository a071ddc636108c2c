"""Physical constants and unit helpers.

All quantities are SI unless a suffix says otherwise.
"""

import math

MU_0 = 4.0 * math.pi * 1e-7  # vacuum permeability [H/m]
EPS_0 = 8.8541878128e-12     # vacuum permittivity [F/m]


def dbm_to_watts(p_dbm: float) -> float:
    """Convert power in dBm to watts."""
    return 10.0 ** (p_dbm / 10.0) * 1e-3


def watts_to_dbm(p_w: float) -> float:
    """Convert power in watts to dBm."""
    if p_w <= 0.0:
        raise ValueError("power must be positive")
    return 10.0 * math.log10(p_w * 1e3)


def dbm_per_hz_to_w_per_hz(n_dbm_hz: float) -> float:
    """Convert a noise density in dBm/Hz to W/Hz (-140 dBm/Hz -> 1e-17 W/Hz)."""
    return 10.0 ** (n_dbm_hz / 10.0) * 1e-3
