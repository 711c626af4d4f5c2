"""Riemann/Poincare sphere helpers for polarisations ``p = psi2/psi1``.

Sphere coordinates are the normalised Stokes vector of ``(psi1, psi2)``::

    x = 2 Re(conj(psi1) psi2) / n,  y = 2 Im(conj(psi1) psi2) / n,
    z = (|psi1|**2 - |psi2|**2) / n,   n = |psi1|**2 + |psi2|**2

so ``p = 0`` is the north pole and ``p = inf`` the south pole.  Projecting
from the south pole onto the equatorial plane maps a point back to ``p``
itself; the top hemisphere is the unit disk.
"""
import numpy as np


def homogeneous(p):
    """Homogeneous coordinates ``(w1, w2)`` of polarisations (inf -> (0, 1))."""
    p = np.asarray(p, dtype=complex)
    inf = np.isinf(p)
    w1 = np.where(inf, 0, 1).astype(complex)
    w2 = np.where(inf, 1 + 0j, p)
    return w1, w2


def polarisation_from_homogeneous(v1, v2):
    v1 = np.asarray(v1, dtype=complex)
    v2 = np.asarray(v2, dtype=complex)
    out = np.full(np.broadcast(v1, v2).shape, complex(np.inf, 0.0))
    nz = v1 != 0
    np.divide(v2, v1, out=out, where=nz)
    return out


def to_sphere(v1, v2):
    v1 = np.asarray(v1, dtype=complex)
    v2 = np.asarray(v2, dtype=complex)
    scale = np.maximum(np.abs(v1), np.abs(v2))
    scale = np.where(scale == 0, 1.0, scale)
    a, b = v1 / scale, v2 / scale
    n = np.abs(a) ** 2 + np.abs(b) ** 2
    cross = np.conj(a) * b
    return np.stack(
        [2 * cross.real / n, 2 * cross.imag / n, (np.abs(a) ** 2 - np.abs(b) ** 2) / n],
        axis=-1,
    )


def polarisation_to_sphere(p):
    return to_sphere(*homogeneous(p))


def stereographic(points):
    """Project sphere points from the south pole onto the equatorial plane."""
    points = np.asarray(points, dtype=float)
    x, y, z = points[..., 0], points[..., 1], points[..., 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (x + 1j * y) / (1 + z)
    return np.where(z <= -1, complex(np.inf, 0.0), w)


def chordal_distance(p, q):
    """Chordal distance on the unit Riemann sphere, in [0, 2].

    Infinite polarisations are handled through homogeneous coordinates.
    """
    a1, a2 = homogeneous(p)
    b1, b2 = homogeneous(q)
    na = np.hypot(np.abs(a1), np.abs(a2))
    nb = np.hypot(np.abs(b1), np.abs(b2))
    # rescale large finite coordinates before forming the cross product
    d = 2 * np.abs((a1 / na) * (b2 / nb) - (a2 / na) * (b1 / nb))
    return float(d) if d.ndim == 0 else d
