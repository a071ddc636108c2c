import numpy as np
import pytest

from mi_sim import (Scenario, ScenarioError, load_scenario_text,
                    serialize_scenario, three_receiver_default)


def test_empty_file_gives_full_defaults():
    s = load_scenario_text("")
    assert s.water.relative_permittivity == 81.0
    assert s.water.conductivity == 0.1
    assert s.air.relative_permittivity == 1.0
    assert s.frequency == 1e6
    assert s.coil.radius == 0.05
    assert s.coil.turns == 10
    assert s.coil.resistance == 0.5
    assert s.noise_dbm_hz == -140.0
    assert s.tx_depth == 0.5
    assert len(s.receivers) == 1
    assert s.receivers[0].range_m == 5.0
    assert s.receivers[0].depth_m == 0.3
    assert s.noise_density == pytest.approx(1e-17)


def test_comments_and_overrides():
    s = load_scenario_text("""
# deeper deployment
tx.depth_m = 2.0
rx.1.depth_m = 1.5  # receiver depth
model = exact
draws = 500
""")
    assert s.tx_depth == 2.0
    assert s.receivers[0].depth_m == 1.5
    assert s.model == "exact"
    assert s.draws == 500


def test_unknown_key_reports_line():
    with pytest.raises(ScenarioError, match="line 3"):
        load_scenario_text("\n\nno.such.key = 1\n")


def test_bad_value_reports_line():
    with pytest.raises(ScenarioError, match="line 1"):
        load_scenario_text("draws = ten\n")


def test_missing_equals_reports_line():
    with pytest.raises(ScenarioError, match="line 2"):
        load_scenario_text("# fine\nfrequency_hz 2e6\n")


def test_too_many_receivers_rejected():
    with pytest.raises(ScenarioError, match="rx.count"):
        load_scenario_text("rx.count = 4\n")


def test_receiver_key_without_count_rejected():
    with pytest.raises(ScenarioError, match="not applicable"):
        load_scenario_text("rx.2.range_m = 3.0\n")


def test_invalid_sweep_rejected():
    with pytest.raises(ScenarioError):
        load_scenario_text("sweep.p_dbm.start = 10\nsweep.p_dbm.stop = -10\n")


def test_round_trip_is_idempotent():
    text = "frequency_hz = 2.5e6\nrx.count = 2\nrx.2.azimuth_deg = 45\nseed = 9\n"
    once = serialize_scenario(load_scenario_text(text))
    twice = serialize_scenario(load_scenario_text(once))
    assert once == twice
    assert load_scenario_text(once) == load_scenario_text(twice)


def test_serialize_preserves_three_receivers():
    s = three_receiver_default()
    back = load_scenario_text(serialize_scenario(s))
    assert back == s
    assert [r.azimuth_deg for r in back.receivers] == [0.0, 180.0, 90.0]
    assert back.model == "exact"


def test_power_grid_strictly_increasing():
    grid = Scenario().power_grid_dbm()
    assert np.all(np.diff(grid) > 0)
    assert grid[0] == -80.0
    assert grid[-1] == 6.0
