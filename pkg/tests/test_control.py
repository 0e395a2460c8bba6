import pytest
from hypothesis import given, strategies as st

from pitchopt.control import (AffineMap, Calibration, PidGains, PidState,
                              RampCommand, pid_step)
from pitchopt.control.pid import ramp_value


# -- ramp ------------------------------------------------------------------

def test_ramp_values():
    cmd = RampCommand(0.32, 1.6)
    assert ramp_value(cmd, 0.0) == 0.0
    assert ramp_value(cmd, 0.8) == pytest.approx(0.16, rel=1e-15)
    assert ramp_value(cmd, 1.6) == 0.32
    assert ramp_value(cmd, 7.0) == 0.32


def test_ramp_from_previous_command():
    cmd = RampCommand(0.5, 1.0, start=0.3)
    assert ramp_value(cmd, 0.0) == 0.3
    assert ramp_value(cmd, 0.5) == pytest.approx(0.4)
    down = RampCommand(0.1, 1.0, start=0.3)
    assert ramp_value(down, 0.5) == pytest.approx(0.2)


@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0), st.floats(0.01, 3.0))
def test_ramp_monotone_and_saturating(t1, t2, target):
    cmd = RampCommand(target, 1.6)
    a, b = sorted((t1, t2))
    assert ramp_value(cmd, a) <= ramp_value(cmd, b) <= target
    assert ramp_value(cmd, max(b, 1.6)) == target


def test_ramp_invalid():
    with pytest.raises(ValueError):
        RampCommand(-0.1)
    with pytest.raises(ValueError):
        RampCommand(0.3, 0.0)
    with pytest.raises(ValueError):
        ramp_value(RampCommand(0.3), -1.0)


# -- PID -------------------------------------------------------------------

def test_gains_validated():
    with pytest.raises(ValueError):
        PidGains(-1.0, 0.0)
    with pytest.raises(ValueError):
        PidGains(1.0, 1.0, integral_limit=0.0)


def test_proportional_only():
    g = PidGains(10.0, 0.0)
    assert pid_step(g, PidState(), 0.3, 1e-3) == pytest.approx(3.0)
    assert pid_step(g, PidState(), -0.3, 1e-3) == 0.0
    assert pid_step(g, PidState(), 5.0, 1e-3, output_limit=12.0) == 12.0


def test_zero_error_leaves_integral_term():
    g = PidGains(10.0, 100.0)
    s = PidState()
    pid_step(g, s, 0.1, 0.01)
    held = s.integral
    for _ in range(50):
        out = pid_step(g, s, 0.0, 0.01)
    assert out == pytest.approx(held)
    assert held == pytest.approx(0.1)


def test_integral_clamped():
    g = PidGains(0.0, 1000.0, integral_limit=2.0)
    s = PidState()
    for _ in range(100):
        pid_step(g, s, 1.0, 0.01)
    assert s.integral == 2.0
    for _ in range(200):
        pid_step(g, s, -1.0, 0.01)
    assert s.integral == -2.0


def test_derivative_on_measurement_only():
    g = PidGains(0.0, 0.0, kd=1.0)
    s = PidState()
    assert pid_step(g, s, 0.5, 0.01, measurement=0.1) == 0.0
    # set-point jump with a still measurement: no kick
    assert pid_step(g, s, 5.0, 0.01, measurement=0.1) == 0.0
    # falling measurement pushes the output up
    assert pid_step(g, s, 0.0, 0.01, measurement=0.05) == pytest.approx(5.0)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=30))
def test_output_and_integral_bounded(errors):
    g = PidGains(3.0, 50.0, 0.01, integral_limit=4.0)
    s = PidState()
    for k, e in enumerate(errors):
        out = pid_step(g, s, e, 1e-3, measurement=0.01 * k, output_limit=12.0)
        assert 0.0 <= out <= 12.0
        assert abs(s.integral) <= 4.0


def test_pid_rejects_bad_dt():
    with pytest.raises(ValueError):
        pid_step(PidGains(1, 1), PidState(), 0.1, 0.0)


# -- calibration -------------------------------------------------------------

def test_bench_constants():
    cal = Calibration()
    assert cal.degrees(135) == 0.0
    assert cal.degrees(145) == pytest.approx(5.9, rel=1e-14)
    assert cal.volts(1000) == pytest.approx(0.0202 * 1000 - 0.0237, rel=1e-15)
    assert cal.milliamps(500) == pytest.approx(4.1532 * 500 - 1826.67,
                                               rel=1e-15)
    v_out = 60.0
    assert cal.newtons(v_out) == pytest.approx(
        9.81 * ((4.11 * v_out - 49.36) / 1000), rel=1e-14)
    assert abs(cal.newtons(49.36 / 4.11)) < 1e-15


@given(st.floats(-1e4, 1e4))
def test_round_trips(x):
    cal = Calibration()
    for m in (cal.supply_voltage, cal.current_ma, cal.thrust, cal.pitch_deg):
        assert m.inverse(m(x)) == pytest.approx(x, rel=1e-12, abs=1e-9)
        assert m(m.inverse(x)) == pytest.approx(x, rel=1e-12, abs=1e-9)
    assert cal.degrees(cal.servo_for(x)) == pytest.approx(x, rel=1e-12,
                                                         abs=1e-12)
    assert cal.newtons(cal.load_cell_for(x)) == pytest.approx(
        x, rel=1e-12, abs=1e-12)


def test_affine_map_needs_nonzero_scale():
    with pytest.raises(ValueError):
        AffineMap(0.0, 1.0)
    assert AffineMap.about(2.0, 3.0)(3.0) == 0.0
