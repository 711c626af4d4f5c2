"""Periodic piecewise modulation curves ``mu(t)`` in the complex plane.

Each :class:`Segment` is evaluated in local time ``s in [0, duration]``.
Polynomial segments (constant, linear, quadratic) store
``(c0, c1, c2)`` with ``mu = c0 + c1 s + c2 s**2``; arcs store
``mu = c0 + c1 exp(i w s) + c2 exp(-i w s)`` so that an ellipse
``delta + rho cos(w s) + i alpha rho sin(w s)`` and a circle share one form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import Hamiltonian2


class SegmentKind(Enum):
    CONSTANT = "constant"
    LINEAR = "linear"
    QUADRATIC = "quadratic"
    CIRCULAR_ARC = "circular_arc"
    ELLIPTIC_ARC = "elliptic_arc"

    @property
    def is_arc(self):
        return self in (SegmentKind.CIRCULAR_ARC, SegmentKind.ELLIPTIC_ARC)


_N_COEFFS = {
    SegmentKind.CONSTANT: 1,
    SegmentKind.LINEAR: 2,
    SegmentKind.QUADRATIC: 3,
    SegmentKind.CIRCULAR_ARC: 2,
    SegmentKind.ELLIPTIC_ARC: 3,
}


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    duration: float
    coefficients: tuple
    omega: float = 0.0

    def __post_init__(self):
        kind = SegmentKind(self.kind)
        object.__setattr__(self, "kind", kind)
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) != _N_COEFFS[kind]:
            raise ValueError(f"{kind.value} segment takes {_N_COEFFS[kind]} coefficients")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError("segment coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        duration = float(self.duration)
        if not (duration > 0 and math.isfinite(duration)):
            raise ValueError("segment duration must be positive and finite")
        object.__setattr__(self, "duration", duration)
        omega = float(self.omega)
        if kind.is_arc and (omega == 0 or not math.isfinite(omega)):
            raise ValueError("arc segments need a finite nonzero omega")
        object.__setattr__(self, "omega", omega)

    def padded(self) -> tuple[complex, complex, complex]:
        c = self.coefficients + (0j,) * (3 - len(self.coefficients))
        return c[0], c[1], c[2]

    def kernel_params(self) -> tuple[int, complex, complex, complex, float]:
        """``(kind_code, c0, c1, c2, omega)`` for the integration kernels:
        code 0 is polynomial, code 1 exponential."""
        c0, c1, c2 = self.padded()
        return (1 if self.kind.is_arc else 0, c0, c1, c2, self.omega)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        c0, c1, c2 = self.padded()
        if self.kind.is_arc:
            e = np.exp(1j * self.omega * s)
            return c0 + c1 * e + c2 * np.conj(e)
        return c0 + s * (c1 + s * c2)

    def rescaled(self, time_scale: float) -> "Segment":
        """Same path traversed ``time_scale`` times more slowly."""
        k = float(time_scale)
        if not k > 0:
            raise ValueError("time_scale must be positive")
        if self.kind.is_arc:
            return Segment(self.kind, self.duration * k, self.coefficients, self.omega / k)
        c = self.coefficients
        scaled = tuple(cj / k**j for j, cj in enumerate(c))
        return Segment(self.kind, self.duration * k, scaled)


@dataclass(frozen=True)
class ModulationCurve:
    """Closed modulation loop at fixed coupling ``b`` and detuning ``eta``.

    ``family`` and ``params`` record how the curve was built; they are
    informational only and take no part in equality.
    """

    segments: tuple
    b: complex = 1 + 0j
    eta: complex = 0j
    family: str = field(default="custom", compare=False)
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValueError("a curve needs at least one segment")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "eta", complex(self.eta))
        if self.b == 0:
            raise ValueError("b must be nonzero")
        object.__setattr__(self, "params", tuple(self.params))

    @property
    def period(self) -> float:
        return float(sum(s.duration for s in self.segments))

    @property
    def offsets(self) -> np.ndarray:
        """Start times of the segments within one period."""
        return np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])[:-1]])

    def mu_at(self, t):
        t = np.asarray(t, dtype=float)
        T = self.period
        tr = np.mod(t, T)
        offsets = self.offsets
        idx = np.clip(np.searchsorted(offsets, tr, side="right") - 1, 0, len(self.segments) - 1)
        out = np.empty(tr.shape, dtype=complex)
        for j, seg in enumerate(self.segments):
            sel = idx == j
            if np.any(sel):
                out[sel] = seg(tr[sel] - offsets[j])
        return complex(out) if out.ndim == 0 else out

    def hill_coefficient(self, t):
        """``p(t) = b mu(t)`` (the detuning is constant)."""
        return self.b * self.mu_at(t)

    def hamiltonian_at(self, t) -> Hamiltonian2:
        return Hamiltonian2(tau=0, eta=self.eta, b=self.b, mu=self.mu_at(float(t)))

    def closure_error(self) -> float:
        last = self.segments[-1]
        return float(abs(last(last.duration) - self.segments[0](0.0)))

    def continuity_errors(self) -> list[float]:
        """Jumps of ``mu`` at every segment boundary, the closing one last."""
        segs = self.segments
        return [
            float(abs(segs[j](segs[j].duration) - segs[(j + 1) % len(segs)](0.0)))
            for j in range(len(segs))
        ]

    def is_closed(self, tol: float = 1e-9) -> bool:
        return self.closure_error() <= tol

    def sample(self, n: int = 512) -> tuple[np.ndarray, np.ndarray]:
        t = np.linspace(0.0, self.period, n + 1)
        return t, self.mu_at(t)

    def winding_number(self, point: complex = 0j, n: int = 4096) -> int:
        """Winding number of the sampled loop around ``point``."""
        _, mu = self.sample(n)
        z = mu - point
        if np.min(np.abs(z)) <= 1e-12 * max(1.0, float(np.max(np.abs(mu)))):
            raise ValueError("curve passes through the point")
        dphi = np.angle(z[1:] / z[:-1])
        return int(round(dphi.sum() / (2 * np.pi)))

    def rescaled(self, time_scale: float) -> "ModulationCurve":
        return ModulationCurve(
            tuple(s.rescaled(time_scale) for s in self.segments),
            self.b, self.eta, self.family, self.params + (("time_scale", time_scale),),
        )


def constant(value, duration: float = 1.0, b=1.0, eta=0.0) -> ModulationCurve:
    seg = Segment(SegmentKind.CONSTANT, duration, (value,))
    return ModulationCurve((seg,), b, eta, "constant", (("value", complex(value)), ("duration", duration)))


def circular(delta, rho: float, omega: float = 2 * np.pi, b=1.0, eta=0.0) -> ModulationCurve:
    """``mu(t) = delta + rho exp(i omega t)``, one loop per period."""
    if rho < 0:
        raise ValueError("rho must be >= 0")
    if omega == 0:
        raise ValueError("omega must be nonzero")
    seg = Segment(SegmentKind.CIRCULAR_ARC, 2 * np.pi / abs(omega), (delta, rho), omega)
    return ModulationCurve(
        (seg,), b, eta, "circular",
        (("delta", complex(delta)), ("rho", float(rho)), ("omega", float(omega))),
    )


def elliptical(delta, rho: float, alpha: float, omega: float = 2 * np.pi, b=1.0, eta=0.0) -> ModulationCurve:
    """``mu(t) = delta + rho cos(omega t) + i alpha rho sin(omega t)``.

    ``alpha = 1`` is :func:`circular`, ``alpha = 0`` a real cosine (Mathieu).
    """
    if rho < 0 or alpha < 0:
        raise ValueError("rho and alpha must be >= 0")
    if omega == 0:
        raise ValueError("omega must be nonzero")
    plus = rho * (1 + alpha) / 2
    minus = rho * (1 - alpha) / 2
    seg = Segment(SegmentKind.ELLIPTIC_ARC, 2 * np.pi / abs(omega), (delta, plus, minus), omega)
    return ModulationCurve(
        (seg,), b, eta, "elliptical",
        (("delta", complex(delta)), ("rho", float(rho)), ("alpha", float(alpha)), ("omega", float(omega))),
    )


def quadratic_pair(delta, b=1.0, eta=0.0, time_scale: float = 1.0, scale: float = 1.0) -> ModulationCurve:
    """Two parabolic arcs, each of unit duration (period 2).

    First arc ``delta - (1+i)/2 + (1+4i) t - 4i t**2`` for ``t in [0, 1]``,
    second ``delta - (1+i)/2 + (1+3i)(2-t) - 3i (2-t)**2`` for ``t in [1, 2]``,
    re-expanded here in local time ``s = t - 1``.  ``scale`` stretches the
    loop about ``delta`` (the sweep's modulation depth); 1 is the bare curve.
    """
    d = complex(delta)
    k = float(scale)
    a = Segment(SegmentKind.QUADRATIC, 1.0, (d - k * (1 + 1j) / 2, k * (1 + 4j), k * -4j))
    c = Segment(SegmentKind.QUADRATIC, 1.0, (d + k * (1 - 1j) / 2, k * (-1 + 3j), k * -3j))
    curve = ModulationCurve((a, c), b, eta, "quadratic", (("delta", d), ("scale", k)))
    return curve if time_scale == 1 else curve.rescaled(time_scale)


def rectangular(delta, rho: float, alpha: float, b=1.0, eta=0.0, time_scale: float = 1.0) -> ModulationCurve:
    """Rectangle of width ``rho`` and aspect ratio ``alpha`` centred on ``delta``.

    Four linear sides of unit duration (period 4), starting at the top-left
    corner ``delta - rho/2 + i alpha rho/2`` and running clockwise.
    ``rho = 0`` collapses to the static point ``delta``.
    """
    if rho < 0:
        raise ValueError("rho must be >= 0")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    d = complex(delta)
    h, v = rho / 2, 1j * alpha * rho / 2
    sides = (
        Segment(SegmentKind.LINEAR, 1.0, (d - h + v, rho)),
        Segment(SegmentKind.LINEAR, 1.0, (d + h + v, -1j * alpha * rho)),
        Segment(SegmentKind.LINEAR, 1.0, (d + h - v, -rho)),
        Segment(SegmentKind.LINEAR, 1.0, (d - h - v, 1j * alpha * rho)),
    )
    curve = ModulationCurve(
        sides, b, eta, "rectangular",
        (("delta", d), ("rho", float(rho)), ("alpha", float(alpha))),
    )
    return curve if time_scale == 1 else curve.rescaled(time_scale)


FAMILIES = {
    "constant": constant,
    "circular": circular,
    "elliptical": elliptical,
    "quadratic": quadratic_pair,
    "rectangular": rectangular,
}


def custom(segments, b=1.0, eta=0.0) -> ModulationCurve:
    """Curve from explicit segment dicts ``{"kind", "duration", "coefficients", "omega"}``.

    Closure is not enforced; check :meth:`ModulationCurve.is_closed`.
    """
    segs = []
    for spec in segments:
        coeffs = [complex(c) if not isinstance(c, (list, tuple)) else complex(c[0], c[1])
                  for c in spec["coefficients"]]
        segs.append(Segment(SegmentKind(spec["kind"]), spec["duration"], coeffs, spec.get("omega", 0.0)))
    return ModulationCurve(tuple(segs), b, eta, "custom")
