"""Scenario files: flat key-value text with desk-scale defaults.

A scenario fully determines one experiment run.  The format is one
`key = value` pair per line, `#` comments, keys dotted as documented in
DEFAULT_TEXT below; unknown keys and invariant violations are reported
with their line number.  An empty file is the default scenario: air over
lake water, 1 MHz, a 0.05 m / 10-turn / 0.5 ohm coil, one receiver 5 m
away at 0.3 m depth with the transmitter at 0.5 m, -140 dBm/Hz noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import dbm_per_hz_to_w_per_hz
from .field_matrix import MODELS
from .media import CoilSpec, Geometry, Medium
from .sommerfeld import QuadratureSpec
from .strategies import LinkBudget


@dataclass(frozen=True)
class ReceiverSpec:
    """One receiver placement relative to the transmitter."""

    range_m: float = 5.0
    azimuth_deg: float = 0.0
    depth_m: float = 0.3

    def geometry(self, tx_depth: float) -> Geometry:
        return Geometry(tx_depth, self.depth_m, self.range_m,
                        math.radians(self.azimuth_deg))


@dataclass(frozen=True)
class Scenario:
    """Everything an experiment run needs, with desk-scale defaults."""

    air: Medium = Medium(1.0, 1.0, 0.0)
    water: Medium = Medium(1.0, 81.0, 0.1)
    frequency: float = 1e6
    tx_depth: float = 0.5
    receivers: tuple = (ReceiverSpec(),)
    coil: CoilSpec = CoilSpec(0.05, 10, 0.5)
    noise_dbm_hz: float = -140.0
    sweep_start_dbm: float = -80.0
    sweep_stop_dbm: float = 6.0
    sweep_step_db: float = 2.0
    draws: int = 2000
    seed: int = 1
    model: str = "simplified"
    quad_k_max: float = 50.0
    quad_rel_tol: float = 1e-6

    def __post_init__(self):
        if not 1 <= len(self.receivers) <= 3:
            raise ValueError("scenario needs between 1 and 3 receivers")
        if self.frequency <= 0.0:
            raise ValueError("frequency must be positive")
        if self.sweep_step_db <= 0.0 or self.sweep_stop_dbm < self.sweep_start_dbm:
            raise ValueError("power sweep must be strictly increasing")
        if self.draws < 1:
            raise ValueError("draws must be positive")
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")

    @property
    def noise_density(self) -> float:
        return dbm_per_hz_to_w_per_hz(self.noise_dbm_hz)

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi * self.frequency

    def power_grid_dbm(self) -> np.ndarray:
        return np.arange(self.sweep_start_dbm,
                         self.sweep_stop_dbm + 0.5 * self.sweep_step_db,
                         self.sweep_step_db)

    def link_budget(self, p_t: float) -> LinkBudget:
        return LinkBudget(self.angular_frequency, p_t, self.coil.resistance,
                          self.noise_density)

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(k_max_factor=self.quad_k_max,
                              rel_tol=self.quad_rel_tol)


def three_receiver_default() -> Scenario:
    """Swarm layout: receivers on the x, -x and y axes, 5 m out, 0.3 m deep.

    Uses the exact field model: the lateral-wave kernel is effectively
    rank-1, which makes the mirrored +x/-x receivers' coupling rows nearly
    parallel and zero-forcing degenerate; the full-rank exact channel is
    what the multiuser scheme physically relies on.
    """
    return Scenario(model="exact", receivers=(
        ReceiverSpec(5.0, 0.0, 0.3),
        ReceiverSpec(5.0, 180.0, 0.3),
        ReceiverSpec(5.0, 90.0, 0.3),
    ))


class ScenarioError(ValueError):
    """Scenario file rejected; the message carries the offending line."""


def _parse_value(raw: str, line_no: int, kind):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ScenarioError(f"line {line_no}: bad value {raw!r}") from exc


def load_scenario_text(text: str) -> Scenario:
    """Parse scenario text; unknown keys raise with their line number."""
    values: dict = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ScenarioError(f"line {line_no}: expected 'key = value'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _SCHEMA:
            raise ScenarioError(f"line {line_no}: unknown key {key!r}")
        values[key] = (_parse_value(raw, line_no, _SCHEMA[key]), line_no)

    def take(key, default):
        return values.pop(key, (default, 0))[0]

    try:
        air = Medium(take("media.air.mu_r", 1.0), take("media.air.eps_r", 1.0),
                     take("media.air.sigma_s_m", 0.0))
        water = Medium(take("media.water.mu_r", 1.0),
                       take("media.water.eps_r", 81.0),
                       take("media.water.sigma_s_m", 0.1))
        coil = CoilSpec(take("coil.radius_m", 0.05), take("coil.turns", 10),
                        take("coil.resistance_ohm", 0.5))
        count = take("rx.count", 1)
        if not 1 <= count <= 3:
            raise ValueError("rx.count must be between 1 and 3")
        receivers = tuple(
            ReceiverSpec(take(f"rx.{i}.range_m", 5.0),
                         take(f"rx.{i}.azimuth_deg", _DEFAULT_AZIMUTHS[i - 1]),
                         take(f"rx.{i}.depth_m", 0.3))
            for i in range(1, count + 1)
        )
        scenario = Scenario(
            air=air, water=water,
            frequency=take("frequency_hz", 1e6),
            tx_depth=take("tx.depth_m", 0.5),
            receivers=receivers,
            coil=coil,
            noise_dbm_hz=take("noise.density_dbm_hz", -140.0),
            sweep_start_dbm=take("sweep.p_dbm.start", -80.0),
            sweep_stop_dbm=take("sweep.p_dbm.stop", 6.0),
            sweep_step_db=take("sweep.p_dbm.step", 2.0),
            draws=take("draws", 2000),
            seed=take("seed", 1),
            model=take("model", "simplified"),
            quad_k_max=take("quadrature.k_max", 50.0),
            quad_rel_tol=take("quadrature.rel_tol", 1e-6),
        )
    except ValueError as exc:
        if isinstance(exc, ScenarioError):
            raise
        raise ScenarioError(str(exc)) from exc

    if values:
        key, (_, line_no) = next(iter(values.items()))
        raise ScenarioError(
            f"line {line_no}: key {key!r} not applicable (check rx.count)")
    return scenario


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario_text(fh.read())


def serialize_scenario(s: Scenario) -> str:
    """Canonical text form; load(serialize(s)) round-trips exactly."""
    lines = [
        "# mi-sim scenario (canonical form)",
        f"media.air.mu_r = {s.air.relative_permeability!r}",
        f"media.air.eps_r = {s.air.relative_permittivity!r}",
        f"media.air.sigma_s_m = {s.air.conductivity!r}",
        f"media.water.mu_r = {s.water.relative_permeability!r}",
        f"media.water.eps_r = {s.water.relative_permittivity!r}",
        f"media.water.sigma_s_m = {s.water.conductivity!r}",
        f"frequency_hz = {s.frequency!r}",
        f"tx.depth_m = {s.tx_depth!r}",
        f"rx.count = {len(s.receivers)}",
    ]
    for i, rx in enumerate(s.receivers, start=1):
        lines += [
            f"rx.{i}.range_m = {rx.range_m!r}",
            f"rx.{i}.azimuth_deg = {rx.azimuth_deg!r}",
            f"rx.{i}.depth_m = {rx.depth_m!r}",
        ]
    lines += [
        f"coil.radius_m = {s.coil.radius!r}",
        f"coil.turns = {s.coil.turns}",
        f"coil.resistance_ohm = {s.coil.resistance!r}",
        f"noise.density_dbm_hz = {s.noise_dbm_hz!r}",
        f"sweep.p_dbm.start = {s.sweep_start_dbm!r}",
        f"sweep.p_dbm.stop = {s.sweep_stop_dbm!r}",
        f"sweep.p_dbm.step = {s.sweep_step_db!r}",
        f"draws = {s.draws}",
        f"seed = {s.seed}",
        f"model = {s.model}",
        f"quadrature.k_max = {s.quad_k_max!r}",
        f"quadrature.rel_tol = {s.quad_rel_tol!r}",
    ]
    return "\n".join(lines) + "\n"


_DEFAULT_AZIMUTHS = (0.0, 180.0, 90.0)

_SCHEMA = {
    "media.air.mu_r": float, "media.air.eps_r": float, "media.air.sigma_s_m": float,
    "media.water.mu_r": float, "media.water.eps_r": float,
    "media.water.sigma_s_m": float,
    "frequency_hz": float,
    "tx.depth_m": float,
    "rx.count": int,
    "coil.radius_m": float, "coil.turns": int, "coil.resistance_ohm": float,
    "noise.density_dbm_hz": float,
    "sweep.p_dbm.start": float, "sweep.p_dbm.stop": float, "sweep.p_dbm.step": float,
    "draws": int, "seed": int, "model": str,
    "quadrature.k_max": float, "quadrature.rel_tol": float,
}
for _i in (1, 2, 3):
    _SCHEMA[f"rx.{_i}.range_m"] = float
    _SCHEMA[f"rx.{_i}.azimuth_deg"] = float
    _SCHEMA[f"rx.{_i}.depth_m"] = float
