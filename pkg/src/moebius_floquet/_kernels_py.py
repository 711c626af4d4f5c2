"""Pure-Python fallback for the compiled kernels in ``_kernels.pyx``.

Same algorithms, same signatures, same return values; only slower.
"""
import math

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40


def _mu(kind, c0, c1, c2, omega, s):
    if kind == 0:
        return c0 + s * (c1 + s * c2)
    cs, sn = math.cos(omega * s), math.sin(omega * s)
    return c0 + c1 * complex(cs, sn) + c2 * complex(cs, -sn)


def _rhs(p, y):
    return (y[2], y[3], -p * y[0], -p * y[1])


def hill_advance(kind, c0, c1, c2, omega, b, s0, s1, y, rtol, atol, h, hmax,
                 max_steps=50_000_000):
    Y = tuple(complex(v) for v in y)
    if s1 <= s0:
        return Y, h, 0, 0, 0
    s = s0
    naccept = nreject = 0
    status = 0
    rejected = False
    h = min(h, hmax)

    def f(t, v):
        return _rhs(b * _mu(kind, c0, c1, c2, omega, t), v)

    k1 = f(s, Y)
    while True:
        if naccept + nreject >= max_steps:
            status = 2
            break
        if h < 1e-14 * (1.0 + abs(s)):
            status = 1
            break
        last = s + h >= s1
        hs = s1 - s if last else h

        k2 = f(s + C2 * hs, [Y[i] + hs * A21 * k1[i] for i in range(4)])
        k3 = f(s + C3 * hs, [Y[i] + hs * (A31 * k1[i] + A32 * k2[i]) for i in range(4)])
        k4 = f(s + C4 * hs, [Y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]) for i in range(4)])
        k5 = f(s + C5 * hs, [Y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
                             for i in range(4)])
        k6 = f(s + hs, [Y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i])
                        for i in range(4)])
        Yn = tuple(Y[i] + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i])
                   for i in range(4))
        k7 = f(s + hs, Yn)

        err = 0.0
        for i in range(4):
            e = abs(hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]))
            sc = atol + rtol * max(abs(Y[i]), abs(Yn[i]))
            err = max(err, e / sc)

        if err <= 1.0:
            naccept += 1
            s = s1 if last else s + hs
            Y, k1 = Yn, k7
            fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
            if rejected:
                fac = min(fac, 1.0)
            rejected = False
            if not (last and hs < h):
                h = hs * fac
            h = min(h, hmax)
            if last:
                break
        else:
            nreject += 1
            rejected = True
            h = hs * max(0.2, 0.9 * err ** -0.2)
    return Y, h, naccept, nreject, status


def _schrod(mu, b, eta, u):
    c = mu - eta * eta / b
    return (
        -1j * (eta * u[0] + b * u[2]),
        -1j * (eta * u[1] + b * u[3]),
        -1j * (c * u[0] - eta * u[2]),
        -1j * (c * u[1] - eta * u[3]),
    )


def rk4_schrodinger(mu_nodes, b, eta, h, u):
    mu_nodes = [complex(m) for m in mu_nodes]
    b, eta = complex(b), complex(eta)
    U = tuple(complex(v) for v in u)
    n = (len(mu_nodes) - 1) // 2
    half = 0.5 * h
    for k in range(n):
        m0, mh, m1 = mu_nodes[2 * k], mu_nodes[2 * k + 1], mu_nodes[2 * k + 2]
        q1 = _schrod(m0, b, eta, U)
        q2 = _schrod(mh, b, eta, [U[i] + half * q1[i] for i in range(4)])
        q3 = _schrod(mh, b, eta, [U[i] + half * q2[i] for i in range(4)])
        q4 = _schrod(m1, b, eta, [U[i] + h * q3[i] for i in range(4)])
        U = tuple(U[i] + h * (q1[i] + 2 * q2[i] + 2 * q3[i] + q4[i]) / 6 for i in range(4))
    return U
