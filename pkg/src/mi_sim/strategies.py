"""Single-user transmission strategies: capacity, reliability, multiplexing.

The per-hertz SNR of a coupling m at transmit power P_t is
|omega m|^2 P_t / (4 r_c^2 n); all capacities are spectral efficiencies in
bit/s/Hz.  Selection strategies assume mutual-inductance information (MII)
unless a flag says otherwise; ties anywhere break toward the lowest
(transmit, receive) index pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import coupling_matrix, frame_rng, random_frame, random_orientation
from .field_matrix import FieldMatrix
from .media import CoilSpec

LOG2E = float(np.log2(np.e))

STRATEGIES = ("siso", "siso_cs", "simo_cs", "miso_cs", "mimo_mii", "mimo_no_mii")


@dataclass(frozen=True)
class LinkBudget:
    """Link-level constants: omega [rad/s], P_t [W], r_c [ohm], n [W/Hz]."""

    angular_frequency: float
    transmit_power: float
    loop_resistance: float
    noise_density: float

    def __post_init__(self):
        for name in ("angular_frequency", "transmit_power", "loop_resistance",
                     "noise_density"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")

    @property
    def snr_gain(self) -> float:
        """omega^2 / (4 r_c^2 n): per-hertz SNR per |m|^2 per watt [1/(H^2 W)]."""
        return self.angular_frequency**2 / (
            4.0 * self.loop_resistance**2 * self.noise_density)

    def with_power(self, p_t: float) -> "LinkBudget":
        return LinkBudget(self.angular_frequency, p_t,
                          self.loop_resistance, self.noise_density)


@dataclass(frozen=True)
class StrategyResult:
    """One strategy evaluation: capacity plus what was selected and spent."""

    capacity: float
    selected_tx_coils: tuple
    selected_rx_coils: tuple
    power_allocation: np.ndarray
    snr_proxy: float

    def __post_init__(self):
        alloc = np.asarray(self.power_allocation, dtype=float)
        object.__setattr__(self, "power_allocation", alloc)
        if self.capacity < 0.0:
            raise ValueError("capacity must be nonnegative")
        if np.any(alloc < 0.0) or not np.all(np.isfinite(alloc)):
            raise ValueError("power allocation must be finite and nonnegative")


@dataclass(frozen=True)
class ReliabilityReport:
    """Worst/best-case capacity over random orientations at fixed positions."""

    min_capacity: float
    max_capacity: float
    reliability: float
    draws: int


def _capacity_from_snr(snr) -> np.ndarray:
    return np.log1p(snr) * LOG2E


def snr_proxy(m_matrix: np.ndarray, lb: LinkBudget) -> float:
    """Scenario-level SNR scale: gain of the best coupling at full power."""
    sigma_max = float(np.linalg.svd(np.atleast_2d(m_matrix), compute_uv=False)[0])
    return lb.snr_gain * sigma_max**2 * lb.transmit_power


def siso_capacity(m: complex, lb: LinkBudget) -> float:
    """C = log2[1 + |omega m|^2 P_t / (4 r_c^2 n)] for a single coil pair."""
    return float(_capacity_from_snr(lb.snr_gain * abs(m) ** 2 * lb.transmit_power))


def waterfill(gains, p_t: float) -> np.ndarray:
    """Power allocation maximizing sum log2(1 + g_l p_l) with sum p = P_t.

    Exact KKT solution: sort gains descending, then the water level over the
    k strongest channels is (P_t + sum 1/g)/k, valid for the largest k that
    keeps every active power positive.
    """
    gains = np.asarray(gains, dtype=float)
    if np.any(gains < 0.0):
        raise ValueError("gains must be nonnegative")
    if not np.any(gains > 0.0):
        raise ValueError("at least one gain must be positive")
    if p_t <= 0.0:
        raise ValueError("transmit power must be positive")
    order = np.argsort(-gains)
    g = gains[order]
    # a gain whose reciprocal overflows would get ~zero power anyway
    active = g > 1.0 / np.finfo(float).max
    powers = np.zeros_like(g)
    for k in range(int(active.sum()), 0, -1):
        level = (p_t + np.sum(1.0 / g[:k])) / k
        if level > 1.0 / g[k - 1]:
            powers[:k] = level - 1.0 / g[:k]
            break
    out = np.zeros_like(powers)
    out[order] = powers
    return out


def mimo_capacity_no_mii(m_matrix: np.ndarray, lb: LinkBudget) -> StrategyResult:
    """MIMO with equal power P_t/3 per transmit coil and no feedback.

    C = log2 det(I + omega^2 P_t / (12 r_c^2 n) M M^dag); the determinant is
    evaluated on the singular values of M.
    """
    m_matrix = np.asarray(m_matrix, dtype=complex)
    sigma = np.linalg.svd(m_matrix, compute_uv=False)
    snr = lb.snr_gain * (lb.transmit_power / 3.0) * sigma**2
    return StrategyResult(
        capacity=float(_capacity_from_snr(snr).sum()),
        selected_tx_coils=(0, 1, 2),
        selected_rx_coils=(0, 1, 2),
        power_allocation=np.full(3, lb.transmit_power / 3.0),
        snr_proxy=snr_proxy(m_matrix, lb),
    )


def mimo_capacity_mii(m_matrix: np.ndarray, lb: LinkBudget) -> StrategyResult:
    """MIMO with full MII: SVD eigenchannels and water-filled power.

    power_allocation is per eigenchannel, strongest first.
    """
    m_matrix = np.asarray(m_matrix, dtype=complex)
    sigma = np.linalg.svd(m_matrix, compute_uv=False)
    gains = lb.snr_gain * sigma**2
    powers = waterfill(gains, lb.transmit_power)
    return StrategyResult(
        capacity=float(_capacity_from_snr(gains * powers).sum()),
        selected_tx_coils=(0, 1, 2),
        selected_rx_coils=(0, 1, 2),
        power_allocation=powers,
        snr_proxy=snr_proxy(m_matrix, lb),
    )


def select_siso_cs(m_matrix: np.ndarray) -> tuple:
    """Indices (p*, q*) of the largest |m_{p,q}|, lowest (p, q) on ties."""
    mag = np.abs(np.asarray(m_matrix))
    best, best_mag = (0, 0), -1.0
    for p in range(3):
        for q in range(3):
            if mag[q, p] > best_mag:
                best, best_mag = (p, q), mag[q, p]
    return best


def siso_cs_capacity(m_matrix: np.ndarray, lb: LinkBudget) -> StrategyResult:
    """Best single coil pair at both ends, full power on the selected coil."""
    m_matrix = np.asarray(m_matrix, dtype=complex)
    p_star, q_star = select_siso_cs(m_matrix)
    alloc = np.zeros(3)
    alloc[p_star] = lb.transmit_power
    return StrategyResult(
        capacity=siso_capacity(m_matrix[q_star, p_star], lb),
        selected_tx_coils=(p_star,),
        selected_rx_coils=(q_star,),
        power_allocation=alloc,
        snr_proxy=snr_proxy(m_matrix, lb),
    )


def simo_cs_capacity(m_matrix: np.ndarray, lb: LinkBudget) -> StrategyResult:
    """Best transmit coil into all three receive coils (requires MII).

    p* maximizes the receive-column energy sum_q |m_{p,q}|^2; capacity is
    log2(1 + omega^2 P_t sum_q |m_{p*,q}|^2 / (4 r_c^2 n)).  Without MII the
    transmitter cannot select and the strategy degenerates to MIMO without
    MII; use `mimo_capacity_no_mii` for that case.
    """
    m_matrix = np.asarray(m_matrix, dtype=complex)
    energies = np.sum(np.abs(m_matrix) ** 2, axis=0)
    p_star = int(np.argmax(energies))
    alloc = np.zeros(3)
    alloc[p_star] = lb.transmit_power
    return StrategyResult(
        capacity=float(_capacity_from_snr(
            lb.snr_gain * lb.transmit_power * energies[p_star])),
        selected_tx_coils=(p_star,),
        selected_rx_coils=(0, 1, 2),
        power_allocation=alloc,
        snr_proxy=snr_proxy(m_matrix, lb),
    )


def miso_cs_capacity(m_matrix: np.ndarray, lb: LinkBudget,
                     mii_available: bool = True) -> StrategyResult:
    """All transmit coils into the best single receive coil.

    With MII the transmitter beamforms along the conjugate of the selected
    row (the capacity-optimal rank-1 precoder), collecting the full row
    energy at full power.  Without MII it splits P_t/3 per coil with no
    phase alignment, so only the incoherent row energy at a third of the
    power is collected.
    """
    m_matrix = np.asarray(m_matrix, dtype=complex)
    row_energy = np.sum(np.abs(m_matrix) ** 2, axis=1)
    q_star = int(np.argmax(row_energy))
    if mii_available:
        row = m_matrix[q_star]
        weight = np.abs(row) ** 2
        alloc = lb.transmit_power * (
            weight / weight.sum() if weight.sum() > 0 else np.full(3, 1 / 3))
        snr = lb.snr_gain * lb.transmit_power * row_energy[q_star]
    else:
        alloc = np.full(3, lb.transmit_power / 3.0)
        snr = lb.snr_gain * (lb.transmit_power / 3.0) * row_energy[q_star]
    return StrategyResult(
        capacity=float(_capacity_from_snr(snr)),
        selected_tx_coils=(0, 1, 2),
        selected_rx_coils=(q_star,),
        power_allocation=alloc,
        snr_proxy=snr_proxy(m_matrix, lb),
    )


def capacity_for_strategy(strategy: str, m_matrix: np.ndarray,
                          lb: LinkBudget) -> StrategyResult:
    """Dispatch a coupling matrix to the named frame-based strategy."""
    if strategy == "siso_cs":
        return siso_cs_capacity(m_matrix, lb)
    if strategy == "simo_cs":
        return simo_cs_capacity(m_matrix, lb)
    if strategy == "miso_cs":
        return miso_cs_capacity(m_matrix, lb)
    if strategy == "mimo_mii":
        return mimo_capacity_mii(m_matrix, lb)
    if strategy == "mimo_no_mii":
        return mimo_capacity_no_mii(m_matrix, lb)
    raise ValueError(f"unknown frame-based strategy {strategy!r} "
                     f"(plain 'siso' draws orientations, not frames)")


def draw_capacity(strategy: str, fm: FieldMatrix, rx_coil: CoilSpec,
                  lb: LinkBudget, rng: np.random.Generator) -> float:
    """Capacity of one Monte Carlo orientation draw.

    Plain SISO draws independent uniform axes at both ends; every other
    strategy draws Haar-random tri-axis frames.
    """
    from .coupling import coupling_constant, mutual_inductance

    if strategy == "siso":
        u_p = random_orientation(rng)
        u_q = random_orientation(rng)
        return siso_capacity(mutual_inductance(u_p, u_q, fm, rx_coil), lb)
    m = coupling_matrix(random_frame(rng), random_frame(rng), fm, rx_coil)
    return capacity_for_strategy(strategy, m, lb).capacity


def reliability(strategy: str, fm: FieldMatrix, rx_coil: CoilSpec,
                lb: LinkBudget, draws: int = 2000,
                seed: int = 0) -> ReliabilityReport:
    """Monte Carlo worst/best capacity ratio at fixed positions.

    Each draw re-derives its generator from (seed, draw index), so results
    do not depend on how draws are scheduled.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if draws < 100:
        raise ValueError("reliability needs at least 100 draws")
    caps = np.array([
        draw_capacity(strategy, fm, rx_coil, lb, frame_rng(seed, d))
        for d in range(draws)
    ])
    c_min, c_max = float(caps.min()), float(caps.max())
    return ReliabilityReport(
        min_capacity=c_min,
        max_capacity=c_max,
        reliability=c_min / c_max if c_max > 0.0 else 0.0,
        draws=draws,
    )


def multiplexing_gain_estimate(strategy: str, m_matrix: np.ndarray,
                               lb: LinkBudget,
                               snr_points=(1e6, 1e8)) -> float:
    """High-SNR capacity slope against log2 of the SNR proxy.

    Rescales the transmit power so the scenario proxy hits each requested
    point, then takes the slope between the two largest.
    """
    points = sorted(snr_points)
    if len(points) < 2 or points[-2] < 1e6:
        raise ValueError("need at least two evaluation points with proxy >= 1e6")
    m_matrix = np.asarray(m_matrix, dtype=complex)
    base = snr_proxy(m_matrix, lb) / lb.transmit_power
    caps = []
    for proxy in points[-2:]:
        budget = lb.with_power(proxy / base)
        if strategy == "siso":
            # Any fixed coupling gives the same slope; use the optimal one.
            caps.append(optimal_siso_capacity(m_matrix, budget))
        else:
            caps.append(capacity_for_strategy(strategy, m_matrix, budget).capacity)
    return (caps[1] - caps[0]) / (np.log2(points[-1]) - np.log2(points[-2]))


def optimal_siso_capacity(m_matrix: np.ndarray, lb: LinkBudget) -> float:
    """Capacity of the orientation-optimal single coil pair (coupling m*)."""
    sigma_max = float(np.linalg.svd(np.asarray(m_matrix), compute_uv=False)[0])
    return siso_capacity(sigma_max, lb)
