"""Closed-form magnetic fields: lateral-wave approximation and dipole oracle.

Cylindrical field components (h_rho, h_phi, h_z) are taken at the receiver
location with the transmitter at the origin; the vertical axis points up,
so the receiver sits at height z = tx_depth - rx_depth relative to the
transmitter.  Currents follow the right-hand rule with respect to the coil
axis; time convention e^{-j omega t}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .media import CoilSpec, Geometry, Medium, wavenumber

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Excitation:
    """Transmit coil drive: geometry of the loop plus its current [A]."""

    coil: CoilSpec
    current: float = 1.0


@dataclass(frozen=True)
class CylField:
    """Complex magnetic field in cylindrical components [A/m]."""

    h_rho: complex
    h_phi: complex
    h_z: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.h_rho, self.h_phi, self.h_z], dtype=complex)

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array().view(float))):
            raise ValueError("field components must be finite")


def source_azimuth(axis: str, field_azimuth: float) -> float:
    """Azimuth angle of an x- or y-oriented source seen from the field point.

    The x and y sources share one functional form and differ only by the
    quarter-turn phi_y = phi_x - pi/2.
    """
    if axis == "x":
        return field_azimuth
    if axis == "y":
        return field_azimuth - np.pi / 2.0
    raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")


def simplified_field(axis: str, geometry: Geometry, medium_air: Medium,
                     medium_water: Medium, excitation: Excitation,
                     frequency: float) -> CylField:
    """Lateral-wave far-field of a unit-axis coil below the interface.

    Valid when both depths are much smaller than the horizontal range; the
    caller is responsible for staying in that regime.  The common factor is
    j i n_c a^2 k1^2 / (2 k2 rho^2) * e^{j k2 (d1+d2) + j k1 rho}; the field
    travels up through the water, along the air side, and back down.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    rho = geometry.horizontal_range
    if rho <= 0.0:
        raise ValueError("horizontal range must be > 0")
    k1 = wavenumber(medium_air, frequency)
    k2 = wavenumber(medium_water, frequency)
    i = excitation.current
    n_c = excitation.coil.turns
    a2 = excitation.coil.radius**2
    phase = np.exp(1j * k2 * (geometry.tx_depth + geometry.rx_depth) + 1j * k1 * rho)
    # Leading -1 aligns the right-hand-rule current convention with the
    # homogeneous-medium dipole limit of the exact model.
    common = -1j * i * n_c * a2 * k1**2 / (2.0 * k2 * rho**2) * phase
    if axis == "z":
        return CylField(-common, 0.0 * common, -(k1 / k2) * common)
    phi_a = source_azimuth(axis, geometry.azimuth)
    return CylField(
        (-k2 / k1) * np.cos(phi_a) * common,
        (-1j * k2 / (k1**2 * rho)) * np.sin(phi_a) * common,
        -np.cos(phi_a) * common,
    )


def dipole_field(axis: str, geometry: Geometry, medium: Medium,
                 excitation: Excitation, frequency: float) -> CylField:
    """Closed-form magnetic dipole in an unbounded homogeneous medium.

    H = (1/4pi) e^{jkr} [ k^2 ((r x m) x r)/r + (3 r(r.m) - m)(1/r^3 - jk/r^2) ]
    with m = i n_c pi a^2 along the coil axis.  Serves as the independent
    oracle for the layered-medium integrals when both media are identical.
    """
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    k = wavenumber(medium, frequency)
    moment = excitation.current * excitation.coil.turns * excitation.coil.area
    m_vec = np.zeros(3)
    m_vec[AXES.index(axis)] = moment

    phi = geometry.azimuth
    r_vec = np.array([
        geometry.horizontal_range * np.cos(phi),
        geometry.horizontal_range * np.sin(phi),
        geometry.height_offset,
    ])
    r = np.linalg.norm(r_vec)
    r_hat = r_vec / r
    radiating = k**2 * (np.cross(np.cross(r_hat, m_vec), r_hat)) / r
    induction = (3.0 * r_hat * np.dot(r_hat, m_vec) - m_vec) * (1.0 / r**3 - 1j * k / r**2)
    h_cart = np.exp(1j * k * r) / (4.0 * np.pi) * (radiating + induction)

    rho_hat = np.array([np.cos(phi), np.sin(phi), 0.0])
    phi_hat = np.array([-np.sin(phi), np.cos(phi), 0.0])
    z_hat = np.array([0.0, 0.0, 1.0])
    return CylField(
        complex(np.dot(h_cart, rho_hat)),
        complex(np.dot(h_cart, phi_hat)),
        complex(np.dot(h_cart, z_hat)),
    )
