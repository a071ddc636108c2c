"""Monte Carlo experiment runner and CSV emission.

Five experiments produce the standard result families:

  fig3_upper      best-case capacity per strategy over a power sweep
  fig4_lower      worst-case capacity per strategy over a power sweep
  fig5_reliability  Definition-1 reliability per strategy vs power
  fig6_multiuser  per-user reliability of the 3-receiver downlink
  fig7_estimation coil selection from estimated vs perfect MII

Rows are deterministic in (scenario, seed): draw d always derives its
generator from (seed, d), pilots and measurement noise from tagged
sub-seeds, and the CSV is written sorted by (power, draw) with fixed
formatting.  The draws axis may be chunked across MI_SIM_THREADS workers
without changing a byte of output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constants import dbm_to_watts
from .coupling import (coupling_constant, coupling_matrix, frame_rng,
                       random_frame, random_orientation)
from .field_matrix import FieldMatrix, field_matrix
from .fields import Excitation
from .multiuser import UserChannel, multiuser_rates
from .scenario import Scenario, three_receiver_default
from .strategies import LOG2E

EXPERIMENTS = ("fig3_upper", "fig4_lower", "fig5_reliability",
               "fig6_multiuser", "fig7_estimation")

SWEEP_STRATEGIES = ("siso", "siso_cs", "simo_cs", "mimo_no_mii", "mimo_mii")

CSV_COLUMNS = ("experiment", "strategy", "power_dbm", "draw", "capacity_bphz",
               "min_c", "max_c", "reliability", "est_error")


@dataclass(frozen=True)
class ResultRow:
    """One flat output record; empty fields serialize as empty strings."""

    experiment: str
    strategy: str
    power_dbm: float
    draw: int
    capacity_bphz: float
    min_c: float
    max_c: float
    reliability: float = None
    est_error: float = None

    def as_csv_fields(self) -> tuple:
        def num(x):
            return "" if x is None else format(float(x), ".12g")

        return (self.experiment, self.strategy, format(self.power_dbm, ".12g"),
                str(self.draw), num(self.capacity_bphz), num(self.min_c),
                num(self.max_c), num(self.reliability), num(self.est_error))


def worker_count() -> int:
    """Worker cap from MI_SIM_THREADS, defaulting to the CPU count (max 8)."""
    env = os.environ.get("MI_SIM_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, min(os.cpu_count() or 1, 8))


def _chunked_draw_map(fn, draws: int):
    """Evaluate fn(draw) for every draw, chunked across the worker pool.

    fn must be pure given the draw index; results are reassembled in draw
    order, so the schedule cannot affect output.
    """
    workers = worker_count()
    if workers == 1 or draws < 64:
        return [fn(d) for d in range(draws)]
    chunks = np.array_split(np.arange(draws), workers * 4)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda idx: [fn(int(d)) for d in idx], chunks)
        return [item for part in parts for item in part]


def scenario_field_matrix(scenario: Scenario, receiver: int = 0) -> FieldMatrix:
    geometry = scenario.receivers[receiver].geometry(scenario.tx_depth)
    return field_matrix(geometry, scenario.air, scenario.water,
                        Excitation(scenario.coil, 1.0), scenario.frequency,
                        scenario.model, scenario.quadrature())


@dataclass(frozen=True)
class _SweepStats:
    """Per-draw coupling statistics that fix every sweep capacity.

    Capacities over the power grid follow from these through
    C = log2(1 + gain * P); MIMO singular values are frame-independent,
    so they are stored once.
    """

    siso_m2: np.ndarray
    siso_cs_m2: np.ndarray
    simo_col_energy: np.ndarray
    sigma: np.ndarray


def _sweep_stats(scenario: Scenario, fm: FieldMatrix) -> _SweepStats:
    c_const = coupling_constant(fm, scenario.coil)
    kernel = fm.cartesian

    def one_draw(d: int):
        rng_axes = frame_rng(scenario.seed, d)
        u_p = random_orientation(rng_axes)
        u_q = random_orientation(rng_axes)
        m_siso = c_const * (u_q @ kernel @ u_p)
        rng_frames = frame_rng(scenario.seed, d)
        m = coupling_matrix(random_frame(rng_frames), random_frame(rng_frames),
                            fm, scenario.coil)
        mag2 = np.abs(m) ** 2
        return (abs(m_siso) ** 2, mag2.max(), mag2.sum(axis=0).max())

    stats = np.array(_chunked_draw_map(one_draw, scenario.draws))
    sigma = c_const * np.linalg.svd(kernel, compute_uv=False)
    return _SweepStats(stats[:, 0], stats[:, 1], stats[:, 2], sigma)


def _sweep_capacities(strategy: str, stats: _SweepStats, snr_gain: float,
                      powers_w: np.ndarray) -> np.ndarray:
    """Capacity per (power, draw); MIMO rows are constant across draws."""
    draws = stats.siso_m2.size
    if strategy == "siso":
        gains = stats.siso_m2
    elif strategy == "siso_cs":
        gains = stats.siso_cs_m2
    elif strategy == "simo_cs":
        gains = stats.simo_col_energy
    elif strategy == "mimo_no_mii":
        per_mode = np.log1p(np.outer(powers_w / 3.0, snr_gain * stats.sigma**2))
        return np.repeat(per_mode.sum(axis=1)[:, None] * LOG2E, draws, axis=1)
    elif strategy == "mimo_mii":
        from .strategies import waterfill

        mode_gains = snr_gain * stats.sigma**2
        caps = np.array([
            np.sum(np.log1p(mode_gains * waterfill(mode_gains, p)))
            for p in powers_w
        ])
        return np.repeat(caps[:, None] * LOG2E, draws, axis=1)
    else:
        raise ValueError(f"unknown sweep strategy {strategy!r}")
    return np.log1p(np.outer(powers_w, snr_gain * gains)) * LOG2E


def _sweep_rows(name: str, scenario: Scenario) -> list:
    fm = scenario_field_matrix(scenario)
    stats = _sweep_stats(scenario, fm)
    snr_gain = scenario.link_budget(1.0).snr_gain
    grid = scenario.power_grid_dbm()
    powers_w = dbm_to_watts(grid)
    rows = []
    for strategy in SWEEP_STRATEGIES:
        caps = _sweep_capacities(strategy, stats, snr_gain, powers_w)
        i_min = np.argmin(caps, axis=1)
        i_max = np.argmax(caps, axis=1)
        for j, p_dbm in enumerate(grid):
            c_min = float(caps[j, i_min[j]])
            c_max = float(caps[j, i_max[j]])
            extreme = i_min[j] if name == "fig4_lower" else i_max[j]
            rows.append(ResultRow(
                experiment=name,
                strategy=strategy,
                power_dbm=float(p_dbm),
                draw=int(extreme),
                capacity_bphz=float(caps[j, extreme]),
                min_c=c_min,
                max_c=c_max,
                reliability=(c_min / c_max if c_max > 0.0 else 0.0)
                if name == "fig5_reliability" else None,
            ))
    return rows


def _fig6_rows(scenario: Scenario) -> list:
    if len(scenario.receivers) != 3:
        raise ValueError("fig6_multiuser needs a 3-receiver scenario")
    fms = [scenario_field_matrix(scenario, i) for i in range(3)]

    def stream_gains(d: int):
        """Per-user effective |m|^2 of one draw's selection + precoding."""
        rng = frame_rng(scenario.seed, d)
        u_t = random_frame(rng)
        users = []
        for i, fm in enumerate(fms):
            u_r = random_frame(rng)
            users.append(UserChannel(i, coupling_matrix(u_t, u_r, fm,
                                                        scenario.coil)))
        rates = multiuser_rates(users, scenario.link_budget(1.0))
        eff = np.array([
            rates.precode.stream_rows[i] @ rates.precode.precoders[i]
            for i in range(3)
        ])
        return np.abs(eff) ** 2, rates.stream_users

    results = _chunked_draw_map(stream_gains, scenario.draws)
    gains = np.array([g for g, _ in results])
    stream_users = results[0][1]
    snr_gain = scenario.link_budget(1.0).snr_gain
    grid = scenario.power_grid_dbm()
    rows = []
    for uid in sorted(set(stream_users)):
        mask = np.array([u == uid for u in stream_users])
        for p_dbm in grid:
            p_t = dbm_to_watts(float(p_dbm))
            caps = np.sum(
                np.log1p(snr_gain * (p_t / 3.0) * gains[:, mask]), axis=1) * LOG2E
            d_min, d_max = int(np.argmin(caps)), int(np.argmax(caps))
            c_min, c_max = float(caps[d_min]), float(caps[d_max])
            rows.append(ResultRow(
                experiment="fig6_multiuser",
                strategy=f"user{uid + 1}",
                power_dbm=float(p_dbm),
                draw=d_max,
                capacity_bphz=c_max,
                min_c=c_min,
                max_c=c_max,
                reliability=c_min / c_max if c_max > 0.0 else 0.0,
            ))
    return rows


def _fig7_rows(scenario: Scenario) -> list:
    fm = scenario_field_matrix(scenario)
    c_const = coupling_constant(fm, scenario.coil)
    kernel = fm.cartesian
    omega = scenario.angular_frequency
    r_c = scenario.coil.resistance

    def frames(d: int):
        rng = frame_rng(scenario.seed, d)
        return random_frame(rng), random_frame(rng)

    pairs = _chunked_draw_map(frames, scenario.draws)
    m_true = np.array([
        c_const * (u_r.T @ kernel @ u_t) for u_t, u_r in pairs])
    draws = scenario.draws

    # Per-draw orthonormal pilot directions; the pilot current scales with
    # sqrt(P), so one direction set serves the whole sweep.
    pilot_rng = np.random.default_rng(
        np.random.SeedSequence((scenario.seed, 7001)))
    pilot_q = np.array([np.linalg.qr(pilot_rng.standard_normal((3, 3)))[0]
                        for _ in range(draws)])

    mag2_true = np.abs(m_true) ** 2
    col_true = mag2_true.sum(axis=1)
    # flatten (p, q)-major so argmax ties break like select_siso_cs
    mag2_true_pq = mag2_true.transpose(0, 2, 1).reshape(draws, 9)
    flat_best = mag2_true_pq.argmax(axis=1)
    true_cs_gain = mag2_true_pq[np.arange(draws), flat_best]
    true_simo_gain = col_true.max(axis=1)

    snr_gain = scenario.link_budget(1.0).snr_gain
    grid = scenario.power_grid_dbm()
    rows = []
    for j, p_dbm in enumerate(grid):
        p_t = dbm_to_watts(float(p_dbm))
        noise_rng = np.random.default_rng(
            np.random.SeedSequence((scenario.seed, 7002, j)))
        w = np.sqrt(scenario.noise_density / 2.0) * (
            noise_rng.standard_normal((draws, 3, 3))
            + 1j * noise_rng.standard_normal((draws, 3, 3)))
        # M_hat = M - (j/omega) W P^{-1}; P = sqrt(2 P_t / r_c) Q with Q
        # orthonormal, so P^{-1} = Q^T / sqrt(2 P_t / r_c).
        pilot_norm = np.sqrt(2.0 * p_t / r_c)
        m_hat = m_true - (1j / omega) / pilot_norm * np.einsum(
            "dij,dkj->dik", w, pilot_q)
        est_error = float(np.mean(
            np.linalg.norm(m_hat - m_true, axis=(1, 2))
            / np.linalg.norm(m_true, axis=(1, 2))))

        mag2_hat = np.abs(m_hat) ** 2
        est_best = mag2_hat.transpose(0, 2, 1).reshape(draws, 9).argmax(axis=1)
        est_cs_gain = mag2_true_pq[np.arange(draws), est_best]
        est_p = mag2_hat.sum(axis=1).argmax(axis=1)
        est_simo_gain = col_true[np.arange(draws), est_p]

        for strategy, gain, err in (
            ("siso_cs", true_cs_gain, None),
            ("siso_cs_est", est_cs_gain, est_error),
            ("simo_cs", true_simo_gain, None),
            ("simo_cs_est", est_simo_gain, est_error),
        ):
            caps = np.log1p(snr_gain * p_t * gain) * LOG2E
            d_min, d_max = int(np.argmin(caps)), int(np.argmax(caps))
            c_min, c_max = float(caps[d_min]), float(caps[d_max])
            rows.append(ResultRow(
                experiment="fig7_estimation",
                strategy=strategy,
                power_dbm=float(p_dbm),
                draw=d_max,
                capacity_bphz=c_max,
                min_c=c_min,
                max_c=c_max,
                reliability=c_min / c_max if c_max > 0.0 else 0.0,
                est_error=err,
            ))
    return rows


def default_scenario(name: str) -> Scenario:
    """Paper-default scenario for an experiment (fig6 needs 3 receivers)."""
    if name == "fig6_multiuser":
        return three_receiver_default()
    return Scenario()


def run_experiment(name: str, scenario: Scenario) -> list:
    """Run one named experiment; rows come back sorted by (power, draw)."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}")
    if name == "fig6_multiuser":
        rows = _fig6_rows(scenario)
    elif name == "fig7_estimation":
        rows = _fig7_rows(scenario)
    else:
        if len(scenario.receivers) != 1:
            raise ValueError(f"{name} needs a single-receiver scenario")
        rows = _sweep_rows(name, scenario)
    return sorted(rows, key=lambda r: (r.power_dbm, r.draw))


def write_csv(rows, stream) -> None:
    """Emit the fixed-schema CSV; formatting is stable across platforms."""
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        stream.write(",".join(row.as_csv_fields()) + "\n")
