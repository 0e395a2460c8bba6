import math

import numpy as np
import pytest

from pitchopt.errors import Diverged
from pitchopt.motor import (MotorParams, MotorState, advance, clamp_voltage,
                            derivatives, electrical_power, integrate,
                            power_limited_voltage, steady_state, step)
from pitchopt.propeller import TWO_PI

from conftest import deg


def test_params_validated():
    with pytest.raises(ValueError):
        MotorParams(0.0, 1e-2, 0.0, 0.5, 1e-3, 12)
    with pytest.raises(ValueError):
        MotorParams(1e-5, 1e-2, -1.0, 0.5, 1e-3, 12)
    with pytest.raises(ValueError):
        MotorParams(1e-5, 1e-2, 0.0, 0.5, 0.0, 12)


def test_state_flags():
    assert MotorState(-1.0, 0.0).reversed
    assert not MotorState(1.0, 0.0).reversed
    assert MotorState(TWO_PI * 3, 0).rps == pytest.approx(3.0)


def test_derivatives_at_rest_and_on_step():
    p = MotorParams(2e-5, 8e-3, 1e-6, 0.5, 0.01, 12)
    assert derivatives(MotorState(), 0.0, 0.0, p) == (0.0, 0.0)
    dw, di = derivatives(MotorState(), 5.0, 0.0, p)
    assert dw == 0.0
    assert di == pytest.approx(500.0, rel=1e-15)


def test_derivatives_vanish_at_algebraic_equilibrium(motor):
    omega, q, v = 1500.0, 2e-3, 9.0
    i = (q + motor.viscous_b1 * omega) / motor.kb
    v = motor.resistance * i + motor.kb * omega
    dw, di = derivatives(MotorState(omega, i), v, q, motor)
    assert abs(dw) <= 1e-12 * omega
    assert abs(di) <= 1e-12 * omega


def test_voltage_clamped(motor):
    assert clamp_voltage(-3.0, motor) == 0.0
    assert clamp_voltage(99.0, motor) == motor.voltage_limit
    assert electrical_power(0.0, 3.0) == 0.0
    assert electrical_power(12.0, 1.0) == 12.0


def test_rest_is_fixed_point(model, motor):
    for dt in (1e-5, 1e-3):
        assert step(MotorState(), 0.0, deg(10), dt, motor, model) == \
            MotorState()


def test_rejects_bad_step(model, motor):
    with pytest.raises(ValueError):
        step(MotorState(), 1.0, 0.1, 0.0, motor, model)


def test_diverges_loudly(model, motor):
    with pytest.raises(Diverged):
        advance(MotorState(), 12.0, deg(10), 0.5, 20, motor, model)


def test_deterministic(model, motor):
    a = advance(MotorState(), 7.0, deg(9), 1e-4, 500, motor, model)
    b = advance(MotorState(), 7.0, deg(9), 1e-4, 500, motor, model)
    assert a == b


def _trajectory(model, motor, dt, t_end=0.2, v=8.0):
    state = MotorState()
    n = round(t_end / dt)
    return advance(state, v, deg(10), dt, n, motor, model)


def test_rk4_fourth_order(model, motor):
    ref = _trajectory(model, motor, 1e-6)
    errs = [abs(_trajectory(model, motor, dt).omega - ref.omega)
            for dt in (4e-4, 2e-4, 1e-4)]
    orders = [math.log2(errs[k] / errs[k + 1]) for k in range(2)]
    assert min(orders) >= 3.5


def test_charge_integral_matches_fine_sum(model, motor):
    state, charge = integrate(MotorState(), 6.0, deg(10), 1e-4, 100, motor,
                              model)
    s = MotorState()
    fine = 0.0
    for _ in range(10_000):
        prev = s
        s = advance(s, 6.0, deg(10), 1e-6, 1, motor, model)
        fine += 0.5 * (prev.current + s.current) * 1e-6
    assert charge == pytest.approx(fine, rel=1e-7)


@pytest.mark.parametrize("v_in,beta_deg", [(4.0, 8.0), (8.0, 12.0),
                                           (11.0, 20.0)])
def test_power_balance_at_equilibrium(model, motor, v_in, beta_deg):
    s = steady_state(v_in, deg(beta_deg), motor, model)
    q = model.torque(s.rps, deg(beta_deg))
    dw, di = derivatives(s, v_in, q, motor)
    assert abs(dw) < 1e-6 * s.omega and abs(di) < 1e-6 * s.omega
    lhs = v_in * s.current
    rhs = (motor.resistance * s.current ** 2
           + motor.viscous_b1 * s.omega ** 2 + q * s.omega)
    assert abs(lhs - rhs) <= 1e-6 * lhs


def test_power_limited_voltage_hits_ceiling(motor):
    for omega in (0.0, 500.0, 1500.0):
        v = power_limited_voltage(omega, 14.0, motor)
        i = (v - motor.kb * omega) / motor.resistance
        assert v * i == pytest.approx(14.0, rel=1e-12)
        assert v >= motor.kb * omega
