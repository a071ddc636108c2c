"""Three-slot pilot estimation of the mutual-inductance matrices.

Each receiver loop is closed over its resistance r_c, so Kirchhoff's
voltage law r_c i_q + sum_p j omega m_{p,q} i_p + w = 0 makes the measured
loop current i_q = -(j omega / r_c) (M i_p)_q - w / r_c.  Three slots of
orthogonal pilot currents make the pilot matrix invertible and the
per-receiver solve M_hat = (j/omega) [r_c I_meas] [I_pilot]^{-1} exact in
the noiseless limit.  Receiver-to-receiver coupling and transmitter
back-action are neglected; swarm spacing keeps them small.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np


@dataclass(frozen=True)
class PilotBlock:
    """Three orthogonal transmit-current vectors, one per slot [A].

    currents[:, t] is the tri-axis current in slot t; columns share the same
    norm so every slot spends the same power P_t = r_c ||i||^2 / 2.
    """

    currents: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.currents, dtype=float)
        if c.shape != (3, 3):
            raise ValueError("pilot block must be 3 slots of 3 currents")
        if abs(np.linalg.det(c)) < 1e-12 * np.linalg.norm(c) ** 3:
            raise ValueError("pilot matrix must be invertible")
        object.__setattr__(self, "currents", c)


@dataclass(frozen=True)
class MeasurementSet:
    """Measured loop currents per receiver: list of 3x3 complex matrices.

    measurements[l][:, t] is receiver l's tri-axis loop current in slot t.
    """

    measurements: tuple
    noise_variance: float


def orthogonal_pilot_currents(p_t: float, r_c: float,
                              seed: int = 0) -> PilotBlock:
    """Gram-Schmidt pilots scaled so each slot spends power P_t.

    Three random directions are orthogonalized and every column is scaled
    to ||i|| = sqrt(2 P_t / r_c).
    """
    if p_t <= 0.0:
        raise ValueError("pilot power must be positive")
    rng = np.random.default_rng(seed)
    norm_target = np.sqrt(2.0 * p_t / r_c)
    while True:
        raw = rng.standard_normal((3, 3))
        if abs(np.linalg.det(raw)) < 1e-6:
            continue
        cols = []
        for j in range(3):
            v = raw[:, j].copy()
            for u in cols:
                v -= (u @ v) * u
            cols.append(v / np.linalg.norm(v))
        return PilotBlock(norm_target * np.column_stack(cols))


def simulate_measurement(channels, pilots: PilotBlock, omega: float,
                         r_c: float, noise_density: float,
                         seed: int = 0) -> MeasurementSet:
    """Induced loop currents for each receiver over the three pilot slots.

    The noise enters the voltage equation with variance `noise_density`
    (1 Hz bandwidth equivalent) per coil per slot, circularly symmetric,
    and reaches the current divided by r_c.
    """
    if noise_density < 0.0:
        raise ValueError("noise density must be nonnegative")
    rng = np.random.default_rng(seed)
    measured = []
    for m_matrix in channels:
        m = np.asarray(m_matrix, dtype=complex)
        signal = -(1j * omega / r_c) * (m @ pilots.currents)
        w = np.sqrt(noise_density / 2.0) * (
            rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
        measured.append(signal - w / r_c)
    return MeasurementSet(tuple(measured), noise_variance=noise_density)


def estimate_mii(meas: MeasurementSet, pilots: PilotBlock, r_c: float,
                 omega: float) -> list:
    """Per-receiver least-squares solve M_hat = (j/omega) Z I_meas P^{-1}."""
    pilot_matrix = pilots.currents
    if abs(np.linalg.det(pilot_matrix)) < 1e-12 * np.linalg.norm(pilot_matrix) ** 3:
        raise ValueError("pilot matrix is singular")
    inv_pilots = np.linalg.inv(pilot_matrix)
    return [
        (1j / omega) * (r_c * i_meas) @ inv_pilots
        for i_meas in meas.measurements
    ]


def estimation_error(m_matrix: np.ndarray, m_hat: np.ndarray) -> float:
    """Relative Frobenius error ||M_hat - M||_F / ||M||_F."""
    m_matrix = np.asarray(m_matrix, dtype=complex)
    m_hat = np.asarray(m_hat, dtype=complex)
    if m_matrix.shape != m_hat.shape:
        raise ValueError("shapes must match")
    denom = np.linalg.norm(m_matrix)
    if denom == 0.0:
        raise ValueError("error undefined for a zero coupling matrix")
    return float(np.linalg.norm(m_hat - m_matrix) / denom)


def unknown_coupling_count(receivers: int) -> int:
    """Distinct mutual inductances left after the known/neglected ones.

    Of the (3c+2)(3c+3)/2 distinct pairs, each transceiver knows its own
    three internal (zero) couplings and receiver-to-receiver pairs are
    neglected, leaving 9c unknowns for c receivers.
    """
    if receivers < 1:
        raise ValueError("need at least one receiver")
    c = receivers
    total = (3 * c + 2) * (3 * c + 3) // 2
    internal = 3 * (c + 1)
    inter_receiver = 9 * comb(c, 2)
    return total - internal - inter_receiver
