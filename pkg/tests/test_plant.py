import math

import numpy as np
import pytest

from pitchopt import config
from pitchopt.control import PidGains
from pitchopt.errors import BetaOutOfRange, NoSettle
from pitchopt.plant import PlantLimits, steady_electrical_power

from conftest import deg


def test_limits_validated():
    with pytest.raises(ValueError):
        PlantLimits(power_ceiling=0)
    with pytest.raises(ValueError):
        PlantLimits(beta_range=(0.3, 0.1))
    with pytest.raises(ValueError):
        PlantLimits(settle_tolerance=1.0)
    assert PlantLimits().band(0.0) == 1e-3
    assert PlantLimits().band(0.5) == pytest.approx(0.01)


def test_idle_command(plant):
    m = plant.set_propeller(deg(9), 0.0)
    assert not m.saturated
    assert m.power == pytest.approx(0.0, abs=1e-12)


def test_settles_near_the_optimum(plant):
    m = plant.set_propeller(deg(9), 0.52)
    assert not m.saturated
    assert abs(m.thrust - 0.52) <= 0.02 * 0.52
    assert 0 < m.power < plant.limits.power_ceiling
    assert m.settle_time >= plant.ramp_duration + plant.limits.settle_window


def test_saturates_at_low_pitch(plant):
    m = plant.set_propeller(deg(0.59), 0.52)
    assert m.saturated
    assert m.thrust < 0.52 * 0.98
    assert m.power == pytest.approx(plant.limits.power_ceiling, rel=0.02)


@pytest.mark.parametrize("beta_deg", [6.0, 9.0, 14.0, 20.0])
def test_power_matches_steady_state_model(plant, beta_deg):
    m = plant.set_propeller(deg(beta_deg), 0.52)
    ref = steady_electrical_power(plant.model, plant.motor, deg(beta_deg),
                                  0.52)
    assert m.power == pytest.approx(ref, rel=0.05)
    # the measurement window keeps the reading far tighter than that
    assert m.power == pytest.approx(ref, rel=2e-3)


def test_state_persists_and_fresh_resets(plant):
    first = plant.set_propeller(deg(9), 0.52)
    again = plant.set_propeller(deg(9), 0.52)
    assert again.settle_time < first.settle_time
    assert plant.calls == 2
    new = plant.fresh()
    assert new.calls == 0 and new.state.omega == 0.0
    assert new.set_propeller(deg(9), 0.52) == first


def test_deterministic_with_noise(cfg):
    a = config.build_plant(cfg, noise=2e-3, seed=7)
    b = config.build_plant(cfg, noise=2e-3, seed=7)
    c = config.build_plant(cfg, noise=2e-3, seed=8)
    ma = a.set_propeller(deg(10), 0.4)
    assert ma == b.set_propeller(deg(10), 0.4)
    assert ma != c.set_propeller(deg(10), 0.4)


def test_beta_out_of_range(plant):
    lo, hi = plant.limits.beta_range
    with pytest.raises(BetaOutOfRange):
        plant.set_propeller(hi + 0.01, 0.3)
    with pytest.raises(BetaOutOfRange):
        plant.set_propeller(lo - 0.01, 0.3)
    with pytest.raises(ValueError):
        plant.set_propeller(0.1, -0.3)


def test_no_settle_raises(cfg):
    plant = config.build_plant(cfg, gains=PidGains(0.0, 0.05))
    plant = plant.with_limits(timeout=3.0)
    with pytest.raises(NoSettle):
        plant.set_propeller(deg(9), 0.52)


def test_telemetry_stream(cfg):
    seen = []
    plant = config.build_plant(cfg, telemetry=seen.append)
    samples = plant.run(deg(9), 0.32, 0.5)
    assert seen == samples and len(samples) == 500
    t = np.array([s.t for s in samples])
    np.testing.assert_allclose(np.diff(t), 1e-3, rtol=1e-9)
    assert samples[0].thrust_cmd == 0.0
    assert all(0 <= s.voltage <= plant.motor.voltage_limit for s in samples)


def test_zero_command_stays_at_rest(plant):
    samples = plant.run(deg(9), 0.0, 0.2)
    assert all(s.rpm == 0 and s.voltage == 0 and s.power == 0
               for s in samples)


def test_dt_must_divide_control_period(cfg):
    with pytest.raises(Exception):
        config.build_plant(cfg, dt=3e-4)


def test_halving_dt_changes_trajectory_little(cfg):
    a = config.build_plant(cfg).run(deg(9), 0.32, 1.0)
    b = config.build_plant(cfg, dt=5e-5).run(deg(9), 0.32, 1.0)
    rpm_a = np.array([s.rpm for s in a])
    rpm_b = np.array([s.rpm for s in b])
    assert np.max(np.abs(rpm_a - rpm_b)) <= 1e-4 * np.max(rpm_b)


def test_tracks_ramp_within_band(plant):
    samples = plant.run(deg(9), 0.32, 10.0)
    thrust = np.array([s.thrust_meas for s in samples])
    t = np.array([s.t for s in samples])
    late = t >= 3.0
    assert np.all(np.abs(thrust[late] - 0.32) <= 0.02 * 0.32)
    assert thrust.max() <= 1.2 * 0.32
