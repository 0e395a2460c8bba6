import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pitchopt import kernels

compiled = pytest.mark.skipif(kernels.compiled_backend is None,
                              reason="compiled extension not built")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.compiled_backend is not None and \
            os.environ.get("PITCHOPT_BACKEND") != "python":
        assert kernels.BACKEND == "cython"


def test_forced_fallback_gives_same_settled_measurement():
    code = ("import math, pitchopt;"
            "from pitchopt import config, kernels;"
            "m = config.reference_plant().set_propeller(math.radians(9), 0.52);"
            "print(kernels.BACKEND, repr(m.power), repr(m.thrust))")
    env = dict(os.environ, PITCHOPT_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    assert out[0] == "python"
    from pitchopt import config
    m = config.reference_plant().set_propeller(math.radians(9), 0.52)
    assert float(out[1]) == pytest.approx(m.power, rel=1e-9)
    assert float(out[2]) == pytest.approx(m.thrust, rel=1e-9)


@compiled
@settings(max_examples=60, deadline=None)
@given(beta=st.floats(-0.2, 0.8), omega=st.floats(-3000.0, 3000.0),
       v=st.sampled_from([0.0, 0.5, 3.0, 10.0]))
def test_bet_loads_parity(model, beta, omega, v):
    aero = model.with_airspeed(v).aero_vector
    args = (model.nodes, model.chords, model.weights, beta, omega, aero)
    tc, qc = kernels.compiled_backend.bet_loads(*args)
    tp, qp = kernels.python_backend.bet_loads(*args)
    scale = max(abs(tp), abs(qp) * 10, 1e-300)
    assert abs(tc - tp) <= 1e-12 * scale
    assert abs(qc - qp) <= 1e-12 * max(abs(qp), 1e-300) or abs(qc - qp) < 1e-18


@compiled
@pytest.mark.parametrize("v_in,beta,airspeed", [
    (0.0, 0.15, 0.0), (6.0, 0.15, 0.0), (11.0, 0.3, 4.0), (3.0, -0.05, 10.0)])
def test_rk4_parity(model, motor, v_in, beta, airspeed):
    m = model.with_airspeed(airspeed)
    args = (5.0, 0.1, v_in, beta, 1e-4, 50, motor.as_array(), m.nodes,
            m.chords, m.weights, m.aero_vector)
    c = kernels.compiled_backend.rk4_advance(*args)
    p = kernels.python_backend.rk4_advance(*args)
    np.testing.assert_allclose(c, p, rtol=1e-11, atol=1e-14)


def test_rk4_rest_is_fixed_point(model, motor):
    for backend in filter(None, (kernels.compiled_backend,
                                 kernels.python_backend)):
        out = backend.rk4_advance(0.0, 0.0, 0.0, 0.2, 1e-3, 10,
                                  motor.as_array(), model.nodes, model.chords,
                                  model.weights, model.aero_vector)
        assert out == (0.0, 0.0, 0.0)
