"""Exact time evolution under a static 2x2 Hamiltonian.

The propagator is written around the EP as::

    U(t) = exp(-i tau t) [cos(z) I - i t sinc(z) N],   z = sqrt(b mu) t

which is smooth in ``mu`` and reduces to ``exp(-i tau t)(I - i t N)`` at
``mu = 0``.  The action of ``U`` on the polarisation ``p = psi2/psi1`` is a
Moebius transformation, classified by the trace square of its unit
determinant normalisation.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    DEFAULT_TOL,
    Hamiltonian2,
    MoebiusClass,
    is_exceptional,
    sqrt_b_mu,
)
from .errors import NoDominantState, SingularMatrix
from .sphere import homogeneous, polarisation_from_homogeneous, to_sphere

#: point at infinity of the extended complex plane (psi1 == 0)
INFINITY = complex(math.inf, 0.0)

# below this |z| the series for cos and sinc are used
_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class State2:
    psi1: complex
    psi2: complex

    def __post_init__(self):
        object.__setattr__(self, "psi1", complex(self.psi1))
        object.__setattr__(self, "psi2", complex(self.psi2))
        if self.psi1 == 0 and self.psi2 == 0:
            raise ValueError("the zero vector is not a state")

    @classmethod
    def coerce(cls, s) -> "State2":
        if isinstance(s, State2):
            return s
        psi1, psi2 = s
        return cls(psi1, psi2)

    def vector(self) -> np.ndarray:
        return np.array([self.psi1, self.psi2], dtype=complex)

    @property
    def polarisation(self) -> complex:
        return polarisation(self)


@dataclass(frozen=True, eq=False)
class Propagator:
    """Evolution operator ``u`` over elapsed time ``t``.

    ``det`` optionally carries the analytically known determinant, which
    avoids cancellation in ``u11*u22 - u12*u21`` for strongly growing ``u``.
    """

    u: np.ndarray
    t: float
    det: Optional[complex] = field(default=None)

    def determinant(self) -> complex:
        if self.det is not None:
            return self.det
        u = self.u
        return complex(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])

    def __matmul__(self, other):
        if isinstance(other, Propagator):
            det = None
            if self.det is not None and other.det is not None:
                det = self.det * other.det
            return Propagator(self.u @ other.u, self.t + other.t, det)
        return self.u @ other


def _cos_sinc(z: complex) -> tuple[complex, complex]:
    if abs(z) < _SERIES_CUTOFF:
        z2 = z * z
        return 1 - z2 / 2 + z2 * z2 / 24, 1 - z2 / 6 + z2 * z2 / 120
    return cmath.cos(z), cmath.sin(z) / z


def propagator(h: Hamiltonian2, t: float) -> Propagator:
    t = float(t)
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    c, sc = _cos_sinc(sqrt_b_mu(h) * t)
    phase = cmath.exp(-1j * h.tau * t)
    N = np.array([[h.eta, h.b], [h.c, -h.eta]], dtype=complex)
    u = phase * (c * np.eye(2, dtype=complex) - 1j * t * sc * N)
    return Propagator(u, t, cmath.exp(-2j * h.tau * t))


def evolve(h: Hamiltonian2, s, t: float) -> State2:
    v = propagator(h, t).u @ State2.coerce(s).vector()
    return State2(v[0], v[1])


def polarisation(s) -> complex:
    s = State2.coerce(s)
    if s.psi1 == 0:
        return INFINITY
    return s.psi2 / s.psi1


def is_infinite(p) -> bool:
    return cmath.isinf(complex(p))


def moebius_apply(u, p):
    """Apply ``p -> (u22 p + u21) / (u12 p + u11)`` in homogeneous form.

    ``p`` may be a scalar or an array; infinite entries stand for ``psi1 = 0``.
    """
    u = u.u if isinstance(u, Propagator) else np.asarray(u)
    scalar = np.ndim(p) == 0
    w1, w2 = homogeneous(np.atleast_1d(np.asarray(p, dtype=complex)))
    v1 = u[0, 0] * w1 + u[0, 1] * w2
    v2 = u[1, 0] * w1 + u[1, 1] * w2
    out = polarisation_from_homogeneous(v1, v2)
    return complex(out[0]) if scalar else out


def polarisation_flow(h: Hamiltonian2, t: float, p0):
    return moebius_apply(propagator(h, t), p0)


def trace_square(u) -> complex:
    """``sigma = tr(u)**2 / det(u)``, the trace square of ``u / sqrt(det u)``."""
    known = isinstance(u, Propagator) and u.det is not None
    if isinstance(u, Propagator):
        det = u.determinant()
        u = u.u
    else:
        u = np.asarray(u)
        det = complex(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0])
    scale = float(np.max(np.abs(u)))
    # a computed determinant below this relative size is pure cancellation noise
    noise = 0.0 if known else 1e-13 * scale * scale
    if not np.isfinite(scale) or det == 0 or not cmath.isfinite(det) or abs(det) <= noise:
        raise SingularMatrix(f"|det| = {abs(det):.3g} is numerically zero")
    tr = complex(u[0, 0] + u[1, 1])
    return tr * tr / det


def is_scalar_matrix(u, tol: float) -> bool:
    """``u`` proportional to the identity within ``tol * max|u_ij|``."""
    u = u.u if isinstance(u, Propagator) else np.asarray(u)
    bound = tol * float(np.max(np.abs(u)))
    return (
        abs(u[0, 1]) <= bound
        and abs(u[1, 0]) <= bound
        and abs(u[0, 0] - u[1, 1]) <= bound
    )


def classify_sigma(sigma: complex, tol: float) -> MoebiusClass:
    """Class of a non-identity transform with trace square ``sigma``."""
    if abs(sigma - 4) <= tol:
        return MoebiusClass.PARABOLIC
    if abs(sigma.imag) <= tol * max(abs(sigma), 1.0):
        if sigma.real > 4:
            return MoebiusClass.HYPERBOLIC
        if sigma.real >= -tol:
            return MoebiusClass.ELLIPTIC
    return MoebiusClass.LOXODROMIC


def classify_transform(
    u: Union[Propagator, np.ndarray],
    tol: float = DEFAULT_TOL,
    identity_tol: Optional[float] = None,
) -> MoebiusClass:
    """Moebius class of the transformation with matrix ``u``.

    Raises
    ------
    SingularMatrix
        If ``det u`` is numerically zero.
    """
    sigma = trace_square(u)
    if is_scalar_matrix(u, tol if identity_tol is None else identity_tol):
        return MoebiusClass.IDENTITY
    return classify_sigma(sigma, tol)


def fixed_points(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> list[complex]:
    """Eigenstate polarisations ``(-eta +- sqrt(b mu)) / b``."""
    if is_exceptional(h, tol):
        return [-h.eta / h.b]
    r = sqrt_b_mu(h)
    return [(-h.eta + r) / h.b, (-h.eta - r) / h.b]


def limit_polarisation(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> complex:
    """Long-time polarisation: the eigenstate whose eigenvalue has the larger
    imaginary part, or the coalesced eigenstate at the EP.

    Raises
    ------
    NoDominantState
        For elliptic Hamiltonians (real positive ``b*mu``).
    """
    if is_exceptional(h, tol):
        return -h.eta / h.b
    r = sqrt_b_mu(h)
    if abs(r.imag) <= tol:
        raise NoDominantState("b*mu is real and positive: no eigenvector dominates")
    sign = 1 if r.imag > 0 else -1
    return (-h.eta + sign * r) / h.b


@dataclass(frozen=True, eq=False)
class Portrait:
    """Polarisation trajectories sampled on a uniform time grid.

    ``p[i, k]`` is the polarisation of sample ``i`` at ``times[k]``;
    ``sphere[i, k]`` the matching Poincare-sphere point.  Planar coordinates
    of the stereographic projection from the south pole are ``(Re p, Im p)``.
    """

    hamiltonian: Hamiltonian2
    times: np.ndarray
    p: np.ndarray
    sphere: np.ndarray
    markers: list

    @property
    def n_samples(self) -> int:
        return self.p.shape[0]


def sample_sphere(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``n`` homogeneous states uniformly distributed on the Poincare sphere.

    Uses numpy's PCG64 generator; the seed fully determines the output.
    """
    rng = np.random.default_rng(seed)
    z = rng.uniform(-1.0, 1.0, n)
    phi = rng.uniform(0.0, 2 * np.pi, n)
    half = np.arccos(np.clip(z, -1, 1)) / 2
    return np.cos(half).astype(complex), np.sin(half) * np.exp(1j * phi)


def poincare_portrait(
    h: Hamiltonian2,
    n_samples: int = 1000,
    t_max: float = 10.0,
    n_steps: int = 200,
    seed: int = 0,
    initial: Optional[Sequence[complex]] = None,
) -> Portrait:
    """Evolve many initial polarisations under ``h``.

    ``initial`` overrides the random sampling with explicit polarisations.
    """
    if n_steps < 2:
        raise ValueError("n_steps must be >= 2")
    if initial is not None:
        w1, w2 = homogeneous(np.asarray(initial, dtype=complex).ravel())
    else:
        if n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        w1, w2 = sample_sphere(n_samples, seed)
    times = np.linspace(0.0, t_max, n_steps)
    p = np.empty((w1.size, n_steps), dtype=complex)
    sphere = np.empty((w1.size, n_steps, 3))
    for k, t in enumerate(times):
        u = propagator(h, t).u
        u = u / np.max(np.abs(u))
        v1 = u[0, 0] * w1 + u[0, 1] * w2
        v2 = u[1, 0] * w1 + u[1, 1] * w2
        p[:, k] = polarisation_from_homogeneous(v1, v2)
        sphere[:, k] = to_sphere(v1, v2)
    return Portrait(h, times, p, sphere, fixed_points(h))
