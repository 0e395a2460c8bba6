# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled blade-element load kernel and RK4 motor integrator.

Signatures match :mod:`pitchopt._kernels_py` exactly; see that module for
the argument layout of ``aero`` and ``motor``.
"""

from libc.math cimport atan2, isfinite, sqrt


cdef void _loads(const double[::1] r, const double[::1] c,
                 const double[::1] w, double beta, double omega,
                 const double[::1] aero, double* thrust,
                 double* torque) noexcept nogil:
    cdef double rho = aero[0]
    cdef double blades = aero[1]
    cdef double cla = aero[2]
    cdef double alpha0 = aero[3]
    cdef double cd0 = aero[4]
    cdef double k = aero[5]
    cdef double v = aero[6]
    cdef double sign = 1.0
    cdef double t = 0.0
    cdef double q = 0.0
    cdef double u, w2, wr, cg, sg, cl, cd, f
    cdef Py_ssize_t j, n = r.shape[0]

    if omega < 0.0:
        omega = -omega
        sign = -1.0
    if v == 0.0:
        # zero inflow: every section sees alpha = beta
        cl = cla * (beta - alpha0)
        cd = cd0 + k * cl * cl
        for j in range(n):
            f = w[j] * c[j] * r[j] * r[j]
            t += f
            q += f * r[j]
        w2 = omega * omega
        thrust[0] = 0.5 * rho * blades * w2 * cl * t
        torque[0] = sign * 0.5 * rho * blades * w2 * cd * q
        return
    for j in range(n):
        u = r[j] * omega
        w2 = v * v + u * u
        if w2 == 0.0:
            continue
        wr = sqrt(w2)
        cg = u / wr
        sg = v / wr
        cl = cla * (beta - atan2(v, u) - alpha0)
        cd = cd0 + k * cl * cl
        f = w[j] * w2 * c[j]
        t += f * (cl * cg - cd * sg)
        q += f * (cl * sg + cd * cg) * r[j]
    thrust[0] = 0.5 * rho * blades * t
    torque[0] = sign * 0.5 * rho * blades * q


def bet_loads(const double[::1] r, const double[::1] c, const double[::1] w,
              double beta, double omega, const double[::1] aero):
    cdef double t, q
    _loads(r, c, w, beta, omega, aero, &t, &q)
    return t, q


def rk4_advance(double omega, double current, double v, double beta,
                double dt, Py_ssize_t nsteps, const double[::1] motor,
                const double[::1] r, const double[::1] c,
                const double[::1] w, const double[::1] aero):
    cdef double im = motor[0]
    cdef double kb = motor[1]
    cdef double b1 = motor[2]
    cdef double res = motor[3]
    cdef double ind = motor[4]
    cdef double t, q
    cdef double charge = 0.0
    cdef double k1w, k1i, k2w, k2i, k3w, k3i, k4w, k4i, ow, oi
    cdef double h2 = 0.5 * dt
    cdef Py_ssize_t s

    with nogil:
        for s in range(nsteps):
            _loads(r, c, w, beta, omega, aero, &t, &q)
            k1w = (kb * current - b1 * omega - q) / im
            k1i = (v - res * current - kb * omega) / ind

            ow = omega + h2 * k1w
            oi = current + h2 * k1i
            _loads(r, c, w, beta, ow, aero, &t, &q)
            k2w = (kb * oi - b1 * ow - q) / im
            k2i = (v - res * oi - kb * ow) / ind

            ow = omega + h2 * k2w
            oi = current + h2 * k2i
            _loads(r, c, w, beta, ow, aero, &t, &q)
            k3w = (kb * oi - b1 * ow - q) / im
            k3i = (v - res * oi - kb * ow) / ind

            ow = omega + dt * k3w
            oi = current + dt * k3i
            _loads(r, c, w, beta, ow, aero, &t, &q)
            k4w = (kb * oi - b1 * ow - q) / im
            k4i = (v - res * oi - kb * ow) / ind

            omega = omega + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
            charge += dt / 6.0 * (current + 2.0 * (current + h2 * k1i)
                                  + 2.0 * (current + h2 * k2i)
                                  + current + dt * k3i)
            current = current + dt / 6.0 * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
            if not (isfinite(omega) and isfinite(current)):
                break
    return omega, current, charge
