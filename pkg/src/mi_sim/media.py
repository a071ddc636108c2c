"""Electromagnetic media, propagation constants and interface reflection.

Time convention is e^{-j omega t}; outgoing waves carry e^{+jkr} and every
vertical spectral wavenumber k_iz = sqrt(k_i^2 - k_rho^2) is taken on the
Im >= 0 branch so evanescent waves decay away from the interface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import EPS_0, MU_0


@dataclass(frozen=True)
class Medium:
    """Homogeneous isotropic medium.

    relative_permeability and relative_permittivity are dimensionless,
    conductivity is in S/m.
    """

    relative_permeability: float = 1.0
    relative_permittivity: float = 1.0
    conductivity: float = 0.0

    def __post_init__(self):
        if self.relative_permeability <= 0.0:
            raise ValueError("relative permeability must be > 0")
        if self.relative_permittivity <= 0.0:
            raise ValueError("relative permittivity must be > 0")
        if self.conductivity < 0.0:
            raise ValueError("conductivity must be >= 0")

    @property
    def permeability(self) -> float:
        """Absolute permeability mu [H/m]."""
        return self.relative_permeability * MU_0

    @property
    def permittivity(self) -> float:
        """Absolute (real) permittivity epsilon [F/m]."""
        return self.relative_permittivity * EPS_0

    def complex_permittivity(self, frequency: float) -> complex:
        """Effective permittivity epsilon + j sigma/omega [F/m].

        This is the permittivity that enters both the propagation constant
        and the TM reflection coefficient for a conducting medium.
        """
        omega = 2.0 * np.pi * frequency
        return self.permittivity + 1j * self.conductivity / omega


# Defaults used throughout: shallow lake/river water under air at 1 MHz.
AIR = Medium(relative_permeability=1.0, relative_permittivity=1.0, conductivity=0.0)
WATER = Medium(relative_permeability=1.0, relative_permittivity=81.0, conductivity=0.1)


@dataclass(frozen=True)
class Geometry:
    """Transceiver placement: depths, horizontal range and azimuth.

    tx_depth and rx_depth are measured downward from the interface [m],
    horizontal_range is the horizontal separation [m], azimuth is the
    receiver bearing measured from the x axis [rad], reduced to [0, 2pi).
    """

    tx_depth: float
    rx_depth: float
    horizontal_range: float
    azimuth: float = 0.0

    def __post_init__(self):
        if self.tx_depth <= 0.0 or self.rx_depth <= 0.0:
            raise ValueError("both transceivers must be submerged (depths > 0)")
        if self.horizontal_range <= 0.0:
            raise ValueError("horizontal range must be > 0")
        object.__setattr__(self, "azimuth", float(np.mod(self.azimuth, 2.0 * np.pi)))

    @property
    def height_offset(self) -> float:
        """Receiver height above the transmitter: tx_depth - rx_depth [m]."""
        return self.tx_depth - self.rx_depth


def wavenumber(medium: Medium, frequency: float) -> complex:
    """Propagation constant k = omega sqrt(mu (eps + j sigma/omega)).

    The Im >= 0 branch is returned; for a lossless medium the value is
    purely real.
    """
    if frequency <= 0.0:
        raise ValueError("frequency must be positive")
    omega = 2.0 * np.pi * frequency
    k = omega * np.sqrt(medium.permeability * medium.complex_permittivity(frequency))
    if medium.conductivity == 0.0:
        return complex(k.real, 0.0)
    return _upper_branch(k)


def vertical_wavenumber(k: complex, k_rho) -> np.ndarray:
    """k_z = sqrt(k^2 - k_rho^2) on the Im >= 0 branch, vectorized in k_rho."""
    kz = np.sqrt(np.asarray(k**2 - np.asarray(k_rho) ** 2, dtype=complex))
    return np.where(kz.imag < 0.0, -kz, kz)


def _upper_branch(value: complex) -> complex:
    return -value if value.imag < 0.0 else value


def reflection_coefficients(k_rho, medium_1: Medium, medium_2: Medium,
                            frequency: float):
    """TE and TM reflection coefficients of the 2->1 interface.

    R21_TE = (mu1 k2z - mu2 k1z) / (mu1 k2z + mu2 k1z)
    R21_TM = (eps1 k2z - eps2 k1z) / (eps1 k2z + eps2 k1z)

    Permittivities are the complex effective values, so conductive losses
    are included.  Vectorized over k_rho; returns (R_TE, R_TM).
    """
    k1 = wavenumber(medium_1, frequency)
    k2 = wavenumber(medium_2, frequency)
    k1z = vertical_wavenumber(k1, k_rho)
    k2z = vertical_wavenumber(k2, k_rho)
    mu1, mu2 = medium_1.permeability, medium_2.permeability
    eps1 = medium_1.complex_permittivity(frequency)
    eps2 = medium_2.complex_permittivity(frequency)
    r_te = (mu1 * k2z - mu2 * k1z) / (mu1 * k2z + mu2 * k1z)
    r_tm = (eps1 * k2z - eps2 * k1z) / (eps1 * k2z + eps2 * k1z)
    return r_te, r_tm


@dataclass(frozen=True)
class CoilSpec:
    """Air-core loop coil: radius [m], number of turns, loop resistance [ohm]."""

    radius: float = 0.05
    turns: int = 10
    resistance: float = 0.5

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("coil radius must be > 0")
        if self.turns < 1:
            raise ValueError("coil must have at least one turn")
        if self.resistance <= 0.0:
            raise ValueError("loop resistance must be > 0")

    @property
    def area(self) -> float:
        """Loop area pi a^2 [m^2]."""
        return np.pi * self.radius**2
