# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

``hill_advance`` integrates the Hill system for a 2x2 matrix of solutions
with an adaptive Dormand-Prince 5(4) pair; ``rk4_schrodinger`` is the
classical fixed-step RK4 on ``i dU/dt = H(t) U`` used as an independent
oracle.  Both mirror ``_kernels_py`` line for line.
"""
from libc.math cimport cos, sin, fabs, pow, sqrt

ctypedef double complex cplx

cdef enum:
    NSTATE = 4

# Dormand-Prince 5(4)
cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40


cdef inline cplx _mu(int kind, cplx c0, cplx c1, cplx c2, double omega, double s) nogil:
    cdef double cs, sn
    if kind == 0:
        return c0 + s * (c1 + s * c2)
    cs = cos(omega * s)
    sn = sin(omega * s)
    return c0 + c1 * (cs + 1j * sn) + c2 * (cs - 1j * sn)


cdef inline void _rhs(cplx p, cplx* y, cplx* out) nogil:
    out[0] = y[2]
    out[1] = y[3]
    out[2] = -p * y[0]
    out[3] = -p * y[1]


cdef inline double _cabs(cplx z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def hill_advance(int kind, cplx c0, cplx c1, cplx c2, double omega, cplx b,
                 double s0, double s1, y, double rtol, double atol,
                 double h, double hmax, long max_steps=50000000):
    """Integrate ``psi'' = -b mu(s) psi`` from local time ``s0`` to ``s1``.

    ``y = (psi_a, psi_b, dpsi_a, dpsi_b)`` holds two solutions and their
    derivatives.  Returns ``(y, h_next, n_accepted, n_rejected, status)``
    with status 0 on success, 1 on step-size underflow, 2 on exhausting
    ``max_steps``.
    """
    cdef cplx Y[NSTATE]
    cdef cplx Yn[NSTATE]
    cdef cplx Yt[NSTATE]
    cdef cplx k1[NSTATE]
    cdef cplx k2[NSTATE]
    cdef cplx k3[NSTATE]
    cdef cplx k4[NSTATE]
    cdef cplx k5[NSTATE]
    cdef cplx k6[NSTATE]
    cdef cplx k7[NSTATE]
    cdef double s = s0, hs, err, sc, e, fac, ya, yb
    cdef long naccept = 0, nreject = 0
    cdef int i, status = 0
    cdef bint last, rejected = False
    for i in range(NSTATE):
        Y[i] = y[i]
    if s1 <= s0:
        return tuple(Y[i] for i in range(NSTATE)), h, 0, 0, 0
    with nogil:
        if h > hmax:
            h = hmax
        _rhs(b * _mu(kind, c0, c1, c2, omega, s), Y, k1)
        while True:
            if naccept + nreject >= max_steps:
                status = 2
                break
            if h < 1e-14 * (1.0 + fabs(s)):
                status = 1
                break
            last = s + h >= s1
            hs = s1 - s if last else h

            for i in range(NSTATE):
                Yt[i] = Y[i] + hs * A21 * k1[i]
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + C2 * hs), Yt, k2)
            for i in range(NSTATE):
                Yt[i] = Y[i] + hs * (A31 * k1[i] + A32 * k2[i])
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + C3 * hs), Yt, k3)
            for i in range(NSTATE):
                Yt[i] = Y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + C4 * hs), Yt, k4)
            for i in range(NSTATE):
                Yt[i] = Y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + C5 * hs), Yt, k5)
            for i in range(NSTATE):
                Yt[i] = Y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + hs), Yt, k6)
            for i in range(NSTATE):
                Yn[i] = Y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
            _rhs(b * _mu(kind, c0, c1, c2, omega, s + hs), Yn, k7)

            err = 0.0
            for i in range(NSTATE):
                e = _cabs(hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]))
                ya = _cabs(Y[i])
                yb = _cabs(Yn[i])
                sc = atol + rtol * (ya if ya > yb else yb)
                if e / sc > err:
                    err = e / sc

            if err <= 1.0:
                naccept += 1
                s = s1 if last else s + hs
                for i in range(NSTATE):
                    Y[i] = Yn[i]
                    k1[i] = k7[i]
                fac = 5.0 if err == 0.0 else 0.9 * pow(err, -0.2)
                if fac > 5.0:
                    fac = 5.0
                if rejected and fac > 1.0:
                    fac = 1.0
                rejected = False
                # a truncated final step says nothing about the natural step size
                if not (last and hs < h):
                    h = hs * fac
                if h > hmax:
                    h = hmax
                if last:
                    break
            else:
                nreject += 1
                rejected = True
                fac = 0.9 * pow(err, -0.2)
                if fac < 0.2:
                    fac = 0.2
                h = hs * fac
    return tuple(Y[i] for i in range(NSTATE)), h, naccept, nreject, status


cdef inline void _schrod(cplx mu, cplx b, cplx eta, cplx* u, cplx* out) nogil:
    # out = -i H u with H = [[eta, b], [mu - eta^2/b, -eta]], u row-major 2x2
    cdef cplx c = mu - eta * eta / b
    out[0] = -1j * (eta * u[0] + b * u[2])
    out[1] = -1j * (eta * u[1] + b * u[3])
    out[2] = -1j * (c * u[0] - eta * u[2])
    out[3] = -1j * (c * u[1] - eta * u[3])


def rk4_schrodinger(const cplx[:] mu_nodes, cplx b, cplx eta, double h, u):
    """Classical RK4 on ``i dU/dt = H(mu) U`` with ``mu`` pre-sampled.

    ``mu_nodes[2k]`` is ``mu`` at the start of step ``k`` and
    ``mu_nodes[2k + 1]`` at its midpoint, so ``len(mu_nodes) = 2 n + 1``.
    ``u`` is the row-major 2x2 start value; the row-major result is returned.
    """
    cdef Py_ssize_t n = (mu_nodes.shape[0] - 1) // 2, k
    cdef cplx U[4]
    cdef cplx T[4]
    cdef cplx q1[4]
    cdef cplx q2[4]
    cdef cplx q3[4]
    cdef cplx q4[4]
    cdef int i
    cdef cplx m0, mh, m1
    for i in range(4):
        U[i] = u[i]
    with nogil:
        for k in range(n):
            m0 = mu_nodes[2 * k]
            mh = mu_nodes[2 * k + 1]
            m1 = mu_nodes[2 * k + 2]
            _schrod(m0, b, eta, U, q1)
            for i in range(4):
                T[i] = U[i] + 0.5 * h * q1[i]
            _schrod(mh, b, eta, T, q2)
            for i in range(4):
                T[i] = U[i] + 0.5 * h * q2[i]
            _schrod(mh, b, eta, T, q3)
            for i in range(4):
                T[i] = U[i] + h * q3[i]
            _schrod(m1, b, eta, T, q4)
            for i in range(4):
                U[i] = U[i] + h * (q1[i] + 2.0 * q2[i] + 2.0 * q3[i] + q4[i]) / 6.0
    return tuple(U[i] for i in range(4))
