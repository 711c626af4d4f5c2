"""Floquet analysis of periodically modulated Hamiltonians.

With ``tau = 0`` and constant ``eta`` the first component obeys the Hill
equation ``psi1'' = -b mu(t) psi1``.  Two solutions with initial data
``(psi1, psi1') = (1, 0)`` and ``(0, 1)`` are integrated and mapped back to
state space with ``psi2 = (i psi1' - eta psi1) / b``, giving the
fundamental matrix ``Psi(t)`` and the evolution operator
``U(t) = Psi(t) Psi(0)^-1``.  The monodromy ``M = U(T)`` carries the
long-time behaviour, classified like any Moebius transformation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .core import MoebiusClass
from .errors import IntegratorFailure, SingularMatrix
from .modulation import ModulationCurve
from .static import Propagator, State2, classify_transform, trace_square

#: classification tolerance on sigma for integrated monodromies
FLOQUET_TOL = 1e-7
#: relative tolerance for "monodromy proportional to the identity"
IDENTITY_TOL = 1e-8


@dataclass(frozen=True)
class IntegratorOptions:
    """Adaptive integration settings.

    ``initial_step`` and ``max_step`` default to ``T/1000`` and ``T/10``.
    ``backend`` selects the kernel module (``"cython"``/``"python"``);
    ``None`` uses the active one.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    initial_step: Optional[float] = None
    max_step: Optional[float] = None
    backend: Optional[str] = None

    def steps(self, period: float) -> tuple[float, float]:
        h0 = self.initial_step if self.initial_step is not None else period / 1000
        hmax = self.max_step if self.max_step is not None else period / 10
        return h0, hmax


DEFAULT_OPTIONS = IntegratorOptions()


@dataclass(frozen=True, eq=False)
class FundamentalMatrix:
    psi: np.ndarray
    t: float

    def det(self) -> complex:
        return complex(np.linalg.det(self.psi))


@dataclass(frozen=True, eq=False)
class Monodromy:
    m: np.ndarray
    period: float

    def as_propagator(self) -> Propagator:
        # det M = 1 exactly: traceless H and constant eta (Liouville)
        return Propagator(self.m, self.period, 1 + 0j)

    @property
    def trace(self) -> complex:
        return complex(self.m[0, 0] + self.m[1, 1])

    @property
    def sigma(self) -> complex:
        return trace_square(self.as_propagator())

    def det_residual(self) -> float:
        return float(abs(np.linalg.det(self.m) - 1))


@dataclass(frozen=True, eq=False)
class FloquetSpectrum:
    """Multipliers ``m_k``, exponents ``nu_k = log(m_k)/T`` (principal log) and
    ``lambda_k = i nu_k``.  ``lambda`` is only defined modulo
    ``lambda_period = 2 pi / T``."""

    multipliers: tuple
    exponents: tuple
    lambdas: tuple
    period: float

    @property
    def lambda_period(self) -> float:
        return 2 * math.pi / self.period


@dataclass(frozen=True, eq=False)
class FloquetTrajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 2): psi1, psi2
    period: float
    samples_per_period: int

    @property
    def stroboscopic(self) -> np.ndarray:
        """States at integer multiples of the period."""
        return self.states[:: self.samples_per_period]


def _pieces(curve: ModulationCurve, t0: float, t1: float):
    """``(segment, s_start, s_end)`` in local time covering ``[t0, t1]``."""
    T = curve.period
    offsets = curve.offsets
    k = math.floor(t0 / T)
    while True:
        base = k * T
        for off, seg in zip(offsets, curve.segments):
            g0 = base + off
            g1 = g0 + seg.duration
            if g1 <= t0:
                continue
            if g0 >= t1:
                return
            yield seg, max(t0, g0) - g0, min(t1, g1) - g0
        k += 1


def _advance(curve, y, t0, t1, opts, h, backend):
    _, hmax = opts.steps(curve.period)
    b = curve.b
    for seg, sa, sb in _pieces(curve, t0, t1):
        if sb <= sa:
            continue
        kind, c0, c1, c2, omega = seg.kernel_params()
        y, h, _, _, status = backend.hill_advance(
            kind, c0, c1, c2, omega, b, sa, sb, y, opts.rel_tol, opts.abs_tol, h, hmax
        )
        if status:
            reason = "step size underflow" if status == 1 else "step budget exhausted"
            raise IntegratorFailure(f"{reason} in {seg.kind.value} segment at s={sa:.6g}")
    return y, h


def _state_map(curve):
    """``P`` with ``(psi1, psi2) = P (psi1, psi1')``, and its inverse."""
    b, eta = curve.b, curve.eta
    P = np.array([[1, 0], [-eta / b, 1j / b]], dtype=complex)
    Pinv = np.array([[1, 0], [eta / 1j, b / 1j]], dtype=complex)
    return P, Pinv


def _hill_matrix(y) -> np.ndarray:
    return np.array([[y[0], y[1]], [y[2], y[3]]], dtype=complex)


def hill_solutions(curve: ModulationCurve, t: float, opts: IntegratorOptions = DEFAULT_OPTIONS) -> np.ndarray:
    """``[[psi_a, psi_b], [psi_a', psi_b']]`` at time ``t`` (identity at 0)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    backend = kernels.get_backend(opts.backend)
    h0, _ = opts.steps(curve.period)
    y, _ = _advance(curve, (1 + 0j, 0j, 0j, 1 + 0j), 0.0, float(t), opts, h0, backend)
    return _hill_matrix(y)


def fundamental_matrix(curve: ModulationCurve, t: float, opts: IntegratorOptions = DEFAULT_OPTIONS) -> FundamentalMatrix:
    P, _ = _state_map(curve)
    return FundamentalMatrix(P @ hill_solutions(curve, t, opts), float(t))


def evolution_operator(curve: ModulationCurve, t: float, opts: IntegratorOptions = DEFAULT_OPTIONS) -> Propagator:
    P, Pinv = _state_map(curve)
    u = P @ hill_solutions(curve, t, opts) @ Pinv
    return Propagator(u, float(t), 1 + 0j)


def monodromy(curve: ModulationCurve, opts: IntegratorOptions = DEFAULT_OPTIONS) -> Monodromy:
    T = curve.period
    return Monodromy(evolution_operator(curve, T, opts).u, T)


def monodromy_fixed_step(curve: ModulationCurve, steps_per_period: int = 10_000,
                         backend: Optional[str] = None) -> Monodromy:
    """Monodromy from classical RK4 on ``i U' = H(t) U`` with fixed steps.

    Independent of :func:`monodromy`: different equation (first-order
    Schroedinger form instead of Hill form), different scheme, and ``mu`` is
    sampled through :meth:`Segment.__call__` rather than the kernel.  Steps
    are distributed per segment so every corner of the curve is a node.
    """
    impl = kernels.get_backend(backend)
    T = curve.period
    u = (1 + 0j, 0j, 0j, 1 + 0j)
    for seg in curve.segments:
        n = max(1, int(round(steps_per_period * seg.duration / T)))
        nodes = np.ascontiguousarray(seg(np.linspace(0.0, seg.duration, 2 * n + 1)), dtype=complex)
        u = impl.rk4_schrodinger(nodes, curve.b, curve.eta, seg.duration / n, u)
    return Monodromy(_hill_matrix(u), T)


def floquet_spectrum(m: Monodromy) -> FloquetSpectrum:
    M = m.m
    det = complex(np.linalg.det(M))
    if det == 0 or abs(det) < 1e-13 * float(np.max(np.abs(M))) ** 2:
        raise SingularMatrix("monodromy is singular")
    mult = [complex(z) for z in np.linalg.eigvals(M)]
    T = m.period
    nu = [cmath.log(z) / T for z in mult]
    lam = [1j * v for v in nu]
    # dominant (largest growth) first; rounding keeps ties deterministic
    order = sorted(range(2), key=lambda k: (-round(lam[k].imag, 10), -round(lam[k].real, 10)))
    return FloquetSpectrum(
        tuple(mult[k] for k in order),
        tuple(nu[k] for k in order),
        tuple(lam[k] for k in order),
        T,
    )


def classify_monodromy(m: Monodromy, tol: float = FLOQUET_TOL,
                       identity_tol: float = IDENTITY_TOL) -> MoebiusClass:
    return classify_transform(m.as_propagator(), tol, identity_tol)


def is_floquet_ep(m: Monodromy, tol: float = FLOQUET_TOL, identity_tol: float = IDENTITY_TOL) -> bool:
    """Degenerate multipliers with a defective (non-scalar) monodromy."""
    return classify_monodromy(m, tol, identity_tol) is MoebiusClass.PARABOLIC


def stroboscopic_eigenstates(m: Monodromy, tol: float = FLOQUET_TOL) -> list[np.ndarray]:
    """Unit eigenvectors of the monodromy, ordered like :func:`floquet_spectrum`.

    A single vector is returned at a Floquet EP.
    """
    M = m.m
    spec = floquet_spectrum(m)
    vals = spec.multipliers
    if classify_monodromy(m, tol) is MoebiusClass.PARABOLIC:
        vals = ((vals[0] + vals[1]) / 2,)
    out = []
    for lam in vals:
        v1 = np.array([M[0, 1], lam - M[0, 0]], dtype=complex)
        v2 = np.array([lam - M[1, 1], M[1, 0]], dtype=complex)
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        n = np.linalg.norm(v)
        if n == 0:  # scalar monodromy: every vector is an eigenvector
            v, n = np.eye(2, dtype=complex)[len(out)], 1.0
        out.append(v / n)
    return out


def trajectory(curve: ModulationCurve, s0, n_periods: int = 1, samples_per_period: int = 200,
               opts: IntegratorOptions = DEFAULT_OPTIONS) -> FloquetTrajectory:
    """Dense samples of ``psi(t) = U(t) s0`` on a uniform grid.

    Integration is continuous across sample times (they are forced step
    points only); ``n_periods * samples_per_period + 1`` states are returned.
    """
    if n_periods < 1 or samples_per_period < 1:
        raise ValueError("n_periods and samples_per_period must be >= 1")
    s0 = State2.coerce(s0).vector()
    backend = kernels.get_backend(opts.backend)
    T = curve.period
    P, Pinv = _state_map(curve)
    w = Pinv @ s0
    n = n_periods * samples_per_period
    times = np.arange(n + 1) * (T / samples_per_period)
    states = np.empty((n + 1, 2), dtype=complex)
    states[0] = s0
    y = (1 + 0j, 0j, 0j, 1 + 0j)
    h, _ = opts.steps(T)
    for k in range(1, n + 1):
        y, h = _advance(curve, y, times[k - 1], times[k], opts, h, backend)
        states[k] = P @ (_hill_matrix(y) @ w)
    return FloquetTrajectory(times, states, T, samples_per_period)
