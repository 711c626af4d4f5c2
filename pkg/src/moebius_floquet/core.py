"""Two-level non-hermitian Hamiltonians in the (tau, eta, b, mu) parametrization.

A non-diagonal complex 2x2 matrix ``[[a, b], [c, d]]`` is rewritten as::

    H = [[tau + eta, b              ],
         [mu - eta**2 / b, tau - eta]]

with ``tau = (a + d)/2``, ``eta = (a - d)/2`` and ``mu = c + eta**2/b``.
The eigenvalues are ``tau +- sqrt(b*mu)``, so ``mu = 0`` is exactly the
exceptional point (EP), where ``H - tau*I`` is nilpotent.

hbar is fixed to 1 and all quantities are dimensionless.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DiagonalInput, NotExceptional

#: default tolerance of the classification predicates
DEFAULT_TOL = 1e-9


class MoebiusClass(Enum):
    """Conjugacy class of a Moebius transformation (plus the identity)."""

    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    LOXODROMIC = "Loxodromic"
    PARABOLIC = "Parabolic"
    IDENTITY = "Identity"

    @property
    def code(self) -> int:
        return _CLASS_CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "MoebiusClass":
        return _CODE_CLASSES[int(code)]

    def __str__(self):
        return self.value


_CLASS_CODES = {
    MoebiusClass.ELLIPTIC: 0,
    MoebiusClass.HYPERBOLIC: 1,
    MoebiusClass.LOXODROMIC: 2,
    MoebiusClass.PARABOLIC: 3,
    MoebiusClass.IDENTITY: 4,
}
_CODE_CLASSES = {v: k for k, v in _CLASS_CODES.items()}


def _as_complex(value, name):
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class Hamiltonian2:
    """Non-diagonal 2x2 Hamiltonian, ``b != 0``."""

    tau: complex = 0j
    eta: complex = 0j
    b: complex = 1 + 0j
    mu: complex = 0j

    def __post_init__(self):
        for name in ("tau", "eta", "b", "mu"):
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))
        if self.b == 0:
            raise DiagonalInput("b = 0: decoupled levels are not supported")

    @property
    def c(self) -> complex:
        """Lower coupling ``mu - eta**2/b``."""
        return self.mu - self.eta * self.eta / self.b

    @property
    def b_mu(self) -> complex:
        return self.b * self.mu

    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.tau + self.eta, self.b], [self.c, self.tau - self.eta]],
            dtype=complex,
        )

    def entries(self) -> tuple[complex, complex, complex, complex]:
        """The raw entries ``(a, b, c, d)``."""
        return (self.tau + self.eta, self.b, self.c, self.tau - self.eta)


@dataclass(frozen=True)
class Spectrum2:
    lambda_plus: complex
    lambda_minus: complex
    #: ``"plus"``, ``"minus"`` or ``None`` when the imaginary parts tie
    dominant: Optional[str] = None

    @property
    def dominant_eigenvalue(self) -> Optional[complex]:
        if self.dominant is None:
            return None
        return self.lambda_plus if self.dominant == "plus" else self.lambda_minus


def hamiltonian_from_matrix(a, b, c, d) -> Hamiltonian2:
    """Re-parametrize the matrix ``[[a, b], [c, d]]``.

    Raises
    ------
    DiagonalInput
        If ``b == 0``.
    """
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    if b == 0:
        raise DiagonalInput("b = 0: decoupled levels are not supported")
    tau = (a + d) / 2
    eta = (a - d) / 2
    return Hamiltonian2(tau=tau, eta=eta, b=b, mu=c + eta * eta / b)


def sqrt_b_mu(h: Hamiltonian2) -> complex:
    """Principal square root of ``b*mu`` (argument in (-pi/2, pi/2])."""
    return cmath.sqrt(h.b_mu)


def eigenvalues(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> Spectrum2:
    r = sqrt_b_mu(h)
    dominant = None
    if abs(r.imag) > tol:
        dominant = "plus" if r.imag > 0 else "minus"
    return Spectrum2(h.tau + r, h.tau - r, dominant)


def is_exceptional(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> bool:
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return abs(h.mu) <= tol


def eigenvectors(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Unnormalised eigenvectors ``(b, -eta +- sqrt(b*mu))``.

    At the EP the single coalesced vector ``(b, -eta)`` is returned; otherwise
    the pair is ordered (plus root, minus root) to match :func:`eigenvalues`.
    """
    if is_exceptional(h, tol):
        return [np.array([h.b, -h.eta], dtype=complex)]
    r = sqrt_b_mu(h)
    return [
        np.array([h.b, -h.eta + r], dtype=complex),
        np.array([h.b, -h.eta - r], dtype=complex),
    ]


def nilpotent_part(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``N = H - tau*I`` at an EP, satisfying ``N @ N == 0``."""
    if not is_exceptional(h, tol):
        raise NotExceptional(f"|mu| = {abs(h.mu):.3g} exceeds tol = {tol:.3g}")
    eta, b = h.eta, h.b
    return np.array([[eta, b], [-eta * eta / b, -eta]], dtype=complex)


def jordan_transform(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Similarity ``S`` with ``inv(S) @ H @ S == [[tau, 1], [0, tau]]``."""
    if not is_exceptional(h, tol):
        raise NotExceptional(f"|mu| = {abs(h.mu):.3g} exceeds tol = {tol:.3g}")
    S = np.array([[h.b, 0], [-h.eta, 1]], dtype=complex)
    J = np.array([[h.tau, 1], [0, h.tau]], dtype=complex)
    return S, J


def classify_hamiltonian(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> MoebiusClass:
    """Class of the polarisation flow generated by ``h``, read off ``b*mu``.

    Real positive ``b*mu`` is elliptic, real negative hyperbolic, zero
    parabolic and anything off the real axis loxodromic.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    bm = h.b_mu
    mag = abs(bm)
    if mag <= tol:
        return MoebiusClass.PARABOLIC
    if abs(bm.imag) <= tol * mag:
        return MoebiusClass.ELLIPTIC if bm.real > 0 else MoebiusClass.HYPERBOLIC
    return MoebiusClass.LOXODROMIC


def pseudo_hermitian_parameter(h: Hamiltonian2, tol: float = DEFAULT_TOL) -> Optional[float]:
    """Real ``s`` with ``mu == s * conj(b)``, or ``None`` if there is none.

    Only this deformation family is detected: ``s > 0`` is the elliptic
    (unbroken) phase, ``s < 0`` the hyperbolic (broken) one and ``s == 0`` the
    EP.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    if h.mu == 0:
        return 0.0
    s = h.mu / h.b.conjugate()
    if abs(s.imag) <= tol * abs(s):
        return s.real
    return None
