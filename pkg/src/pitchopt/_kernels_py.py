"""Pure-Python/NumPy twin of the compiled kernels.

Both backends take the same arguments:

``r, c, w``
    Quadrature nodes (m), chord at each node (m) and quadrature weights
    (m), all contiguous float64 arrays of equal length.
``aero``
    ``[rho, blades, cl_alpha, alpha0, cd0, k_induced, airspeed]``.
``motor``
    ``[inertia, kb, b1, resistance, inductance]``.

A negative ``omega`` mirrors the load: same thrust, torque negated.
"""

import math

import numpy as np


def bet_loads(r, c, w, beta, omega, aero):
    """Return ``(thrust, torque)`` for one pitch angle and shaft speed."""
    rho, blades, cla, alpha0, cd0, k, v = aero
    sign = 1.0
    if omega < 0.0:
        omega, sign = -omega, -1.0
    if v == 0.0:
        cl = cla * (beta - alpha0)
        cd = cd0 + k * cl * cl
        f = w * c * r * r * (omega * omega)
        return (0.5 * rho * blades * cl * float(np.sum(f)),
                sign * 0.5 * rho * blades * cd * float(np.sum(f * r)))
    u = r * omega
    w2 = v * v + u * u
    live = w2 > 0.0
    if not live.all():
        r, c, w, u, w2 = r[live], c[live], w[live], u[live], w2[live]
    wr = np.sqrt(w2)
    cg = u / wr
    sg = v / wr
    cl = cla * (beta - np.arctan2(v, u) - alpha0)
    cd = cd0 + k * cl * cl
    f = w * w2 * c
    t = float(np.sum(f * (cl * cg - cd * sg)))
    q = float(np.sum(f * (cl * sg + cd * cg) * r))
    return 0.5 * rho * blades * t, sign * 0.5 * rho * blades * q


def rk4_advance(omega, current, v, beta, dt, nsteps, motor, r, c, w, aero):
    """Integrate the motor equations ``nsteps`` times at constant voltage.

    Returns ``(omega, current, charge)``; ``charge`` is the RK4 integral
    of the current over the interval, so ``v * charge`` is the energy
    drawn.
    """
    im, kb, b1, res, ind = (float(x) for x in motor)

    def rhs(om, cur):
        q = bet_loads(r, c, w, beta, om, aero)[1]
        return (kb * cur - b1 * om - q) / im, (v - res * cur - kb * om) / ind

    h2 = 0.5 * dt
    charge = 0.0
    # a blow-up is reported by the caller, as with the compiled kernel
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(nsteps):
            k1w, k1i = rhs(omega, current)
            k2w, k2i = rhs(omega + h2 * k1w, current + h2 * k1i)
            k3w, k3i = rhs(omega + h2 * k2w, current + h2 * k2i)
            k4w, k4i = rhs(omega + dt * k3w, current + dt * k3i)
            omega = omega + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
            charge += dt / 6.0 * (current + 2.0 * (current + h2 * k1i)
                                  + 2.0 * (current + h2 * k2i)
                                  + current + dt * k3i)
            current = current + dt / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i
                                            + k4i)
            if not (math.isfinite(omega) and math.isfinite(current)):
                break
    return float(omega), float(current), float(charge)
