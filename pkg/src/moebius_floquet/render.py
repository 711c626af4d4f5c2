"""Self-contained SVG figures: polarisation portraits, Floquet trajectories
and stability diagrams.  No external assets, fonts or scripts.

Time is encoded with the viridis gradient (dark purple early, yellow late),
interpolated linearly between the anchor colours in :data:`VIRIDIS`.
"""
from __future__ import annotations

import math

import numpy as np

from .core import MoebiusClass
from .floquet import FloquetTrajectory
from .static import Portrait
from .sweep import UNRESOLVED, ClassGrid

VIRIDIS = (
    (68, 1, 84), (72, 40, 120), (62, 74, 137), (49, 104, 142), (38, 130, 142),
    (31, 158, 137), (53, 183, 121), (109, 205, 89), (180, 222, 44), (253, 231, 37),
)

CLASS_COLOURS = {
    MoebiusClass.ELLIPTIC.code: "#3b6fb6",    # stable
    MoebiusClass.HYPERBOLIC.code: "#f2c12e",  # unstable
    MoebiusClass.PARABOLIC.code: "#000000",   # Floquet EP
    MoebiusClass.IDENTITY.code: "#000000",    # sigma = 4 as well
    MoebiusClass.LOXODROMIC.code: "#c8377e",
    UNRESOLVED: "#9a9a9a",
}


def gradient(x: float) -> str:
    """Viridis colour for ``x`` in ``[0, 1]`` as ``#rrggbb``."""
    x = min(max(float(x), 0.0), 1.0) * (len(VIRIDIS) - 1)
    k = min(int(x), len(VIRIDIS) - 2)
    f = x - k
    a, b = VIRIDIS[k], VIRIDIS[k + 1]
    return "#%02x%02x%02x" % tuple(round(a[i] + f * (b[i] - a[i])) for i in range(3))


def _num(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".") if math.isfinite(x) else "0"


def _points(xs, ys) -> str:
    return " ".join(f"{_num(x)},{_num(y)}" for x, y in zip(xs, ys))


def _svg(width: float, height: float, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(width)}" height="{_num(height)}" '
        f'viewBox="0 0 {_num(width)} {_num(height)}" font-family="sans-serif" font-size="12">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _star(cx: float, cy: float, r: float, fill: str) -> str:
    pts = []
    for k in range(10):
        rr = r if k % 2 == 0 else 0.45 * r
        a = -math.pi / 2 + k * math.pi / 5
        pts.append((cx + rr * math.cos(a), cy + rr * math.sin(a)))
    xs, ys = zip(*pts)
    return f'<polygon points="{_points(xs, ys)}" fill="{fill}" stroke="#000" stroke-width="0.8"/>'


def _runs(mask):
    """Maximal runs of True in a 1-D boolean array as ``(start, stop)``."""
    idx = np.flatnonzero(np.diff(np.concatenate([[0], mask.astype(np.int8), [0]])))
    return list(zip(idx[::2], idx[1::2]))


def _chunked_polylines(xs, ys, times, t_max, n_chunks, width, opacity=1.0):
    """Polylines coloured by time, split into at most ``n_chunks`` pieces and
    broken wherever a coordinate is not finite."""
    out = []
    n = len(xs)
    edges = np.linspace(0, n - 1, min(n_chunks, n - 1) + 1).round().astype(int)
    ok = np.isfinite(xs) & np.isfinite(ys)
    for a, b in zip(edges[:-1], edges[1:]):
        colour = gradient(times[(a + b) // 2] / t_max if t_max > 0 else 0.0)
        seg_ok = ok[a:b + 1]
        for r0, r1 in _runs(seg_ok):
            if r1 - r0 < 2:
                continue
            sl = slice(a + r0, a + r1)
            out.append(
                f'<polyline points="{_points(xs[sl], ys[sl])}" fill="none" stroke="{colour}" '
                f'stroke-width="{width}" stroke-opacity="{opacity}"/>'
            )
    return out


def portrait_svg(portrait: Portrait, size: float = 640, extent: float = 1.15, n_chunks: int = 8,
                 title: str | None = None) -> str:
    """Stereographic view of the top hemisphere (the unit disk) with the
    trajectories coloured by time and the fixed points drawn as stars."""
    c = size / 2
    scale = (size / 2 - 10) / extent

    def X(x):
        return c + scale * x

    def Y(y):
        return c - scale * y

    body = [
        '<defs><clipPath id="disk">'
        f'<circle cx="{_num(c)}" cy="{_num(c)}" r="{_num(scale)}"/></clipPath></defs>',
        f'<rect width="{_num(size)}" height="{_num(size)}" fill="#fff"/>',
        f'<circle cx="{_num(c)}" cy="{_num(c)}" r="{_num(scale)}" fill="#f7f7f7" stroke="#000"/>',
        f'<line x1="{_num(X(-1))}" y1="{_num(c)}" x2="{_num(X(1))}" y2="{_num(c)}" stroke="#bbb" stroke-width="0.5"/>',
        f'<line x1="{_num(c)}" y1="{_num(Y(-1))}" x2="{_num(c)}" y2="{_num(Y(1))}" stroke="#bbb" stroke-width="0.5"/>',
        '<g clip-path="url(#disk)">',
    ]
    t = portrait.times
    t_max = float(t[-1])
    lim = 4.0 * extent  # far outside the view; clipping hides the rest
    for i in range(portrait.p.shape[0]):
        p = portrait.p[i]
        far = ~np.isfinite(p) | (np.abs(p) > lim)
        xs = np.where(far, np.nan, X(p.real))
        ys = np.where(far, np.nan, Y(p.imag))
        body += _chunked_polylines(xs, ys, t, t_max, n_chunks, 0.6, 0.7)
    body.append("</g>")
    for m in portrait.markers:
        if np.isfinite(m) and abs(m) <= extent:
            body.append(_star(X(m.real), Y(m.imag), 9, "#e03a3a"))
    if title:
        body.append(f'<text x="10" y="18">{title}</text>')
    return _svg(size, size, body)


def trajectory_svg(traj: FloquetTrajectory, panel: float = 360, n_chunks: int = 256,
                   title: str | None = None) -> str:
    """Both state components in the complex plane, side by side, coloured by time."""
    pad = 28
    body = [f'<rect width="{_num(2 * panel + 3 * pad)}" height="{_num(panel + 2 * pad)}" fill="#fff"/>']
    t = traj.times
    t_max = float(t[-1])
    for comp in range(2):
        z = traj.states[:, comp]
        fin = np.isfinite(z)
        r = float(np.max(np.abs(z[fin]))) if np.any(fin) else 1.0
        r = r * 1.05 if r > 0 else 1.0
        x0 = pad + comp * (panel + pad)
        y0 = pad
        s = panel / (2 * r)
        xs = x0 + panel / 2 + s * z.real
        ys = y0 + panel / 2 - s * z.imag
        body += [
            f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(panel)}" height="{_num(panel)}" '
            'fill="#fafafa" stroke="#000"/>',
            f'<line x1="{_num(x0)}" y1="{_num(y0 + panel / 2)}" x2="{_num(x0 + panel)}" '
            f'y2="{_num(y0 + panel / 2)}" stroke="#ccc" stroke-width="0.5"/>',
            f'<line x1="{_num(x0 + panel / 2)}" y1="{_num(y0)}" x2="{_num(x0 + panel / 2)}" '
            f'y2="{_num(y0 + panel)}" stroke="#ccc" stroke-width="0.5"/>',
            f'<text x="{_num(x0 + 4)}" y="{_num(y0 - 8)}">psi{comp + 1}  (|z| &lt; {r:.3g})</text>',
        ]
        body += _chunked_polylines(xs, ys, t, t_max, n_chunks, 1.2)
        strobe = np.arange(0, len(t), traj.samples_per_period)
        for k in strobe:
            if fin[k]:
                body.append(f'<circle cx="{_num(xs[k])}" cy="{_num(ys[k])}" r="2" fill="#000"/>')
    if title:
        body.append(f'<text x="{pad}" y="{_num(panel + 2 * pad - 6)}">{title}</text>')
    return _svg(2 * panel + 3 * pad, panel + 2 * pad, body)


def _ticks(lo: float, hi: float, n: int = 6) -> np.ndarray:
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    return np.arange(math.ceil(lo / step) * step, hi + 1e-9 * step, step)


def stability_svg(grid: ClassGrid, width: float = 800, height: float = 560, inset=None,
                  title: str | None = None) -> str:
    """Heat map of the class grid with cell-edge boundaries in black.

    Stable (elliptic) cells are blue, unstable (hyperbolic) yellow,
    parabolic black, loxodromic magenta and unresolved gray.  ``inset`` is an
    optional modulation curve drawn in the top-right corner.
    """
    ml, mr, mt, mb = 56, 16, 28, 44
    pw, ph = width - ml - mr, height - mt - mb
    delta, rho = grid.delta, grid.rho
    n_rho, n_delta = grid.classes.shape
    dx, dy = pw / n_delta, ph / n_rho
    body = [f'<rect width="{_num(width)}" height="{_num(height)}" fill="#fff"/>']

    # cells: one rect per run of equal class along each row
    for i in range(n_rho):
        row = grid.classes[i]
        y = mt + ph - (i + 1) * dy
        starts = np.flatnonzero(np.concatenate([[True], row[1:] != row[:-1]]))
        stops = np.concatenate([starts[1:], [n_delta]])
        for a, b in zip(starts, stops):
            body.append(
                f'<rect x="{_num(ml + a * dx)}" y="{_num(y)}" width="{_num((b - a) * dx + 0.3)}" '
                f'height="{_num(dy + 0.3)}" fill="{CLASS_COLOURS.get(int(row[a]), "#9a9a9a")}"/>'
            )

    # boundaries along cell edges between different classes
    path = []
    c = grid.classes
    for i, j in zip(*np.nonzero(c[:, 1:] != c[:, :-1])):
        x = ml + (j + 1) * dx
        y = mt + ph - (i + 1) * dy
        path.append(f"M{_num(x)} {_num(y)}v{_num(dy)}")
    for i, j in zip(*np.nonzero(c[1:, :] != c[:-1, :])):
        x = ml + j * dx
        y = mt + ph - (i + 1) * dy
        path.append(f"M{_num(x)} {_num(y)}h{_num(dx)}")
    if path:
        body.append(f'<path d="{"".join(path)}" stroke="#000" stroke-width="1" fill="none"/>')

    body.append(f'<rect x="{ml}" y="{mt}" width="{_num(pw)}" height="{_num(ph)}" fill="none" stroke="#000"/>')
    d0, d1 = float(delta[0]), float(delta[-1])
    r0, r1 = float(rho[0]), float(rho[-1])
    for v in _ticks(d0, d1):
        x = ml + (v - d0) / (d1 - d0) * pw
        body.append(f'<line x1="{_num(x)}" y1="{_num(mt + ph)}" x2="{_num(x)}" y2="{_num(mt + ph + 4)}" stroke="#000"/>')
        body.append(f'<text x="{_num(x)}" y="{_num(mt + ph + 17)}" text-anchor="middle">{v:g}</text>')
    for v in _ticks(r0, r1):
        y = mt + ph - (v - r0) / (r1 - r0) * ph
        body.append(f'<line x1="{ml - 4}" y1="{_num(y)}" x2="{ml}" y2="{_num(y)}" stroke="#000"/>')
        body.append(f'<text x="{ml - 7}" y="{_num(y + 4)}" text-anchor="end">{v:g}</text>')
    body.append(f'<text x="{_num(ml + pw / 2)}" y="{_num(height - 8)}" text-anchor="middle">Delta</text>')
    body.append(f'<text x="14" y="{_num(mt + ph / 2)}" transform="rotate(-90 14 {_num(mt + ph / 2)})" '
                'text-anchor="middle">rho</text>')
    if title:
        body.append(f'<text x="{ml}" y="18">{title}</text>')
    if inset is not None:
        body += _inset(inset, ml + pw - 118, mt + 8, 110)
    return _svg(width, height, body)


def _inset(curve, x0: float, y0: float, size: float) -> list[str]:
    """Modulation curve in the complex mu plane, with the static EP (mu = 0)
    as a cross."""
    _, mu = curve.sample(400)
    pts = np.concatenate([mu, [0j]])
    cx, cy = (pts.real.max() + pts.real.min()) / 2, (pts.imag.max() + pts.imag.min()) / 2
    half = max(np.ptp(pts.real), np.ptp(pts.imag), 1e-9) / 2 * 1.2
    s = (size - 8) / (2 * half)

    def X(x):
        return x0 + size / 2 + s * (x - cx)

    def Y(y):
        return y0 + size / 2 - s * (y - cy)

    out = [
        f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(size)}" height="{_num(size)}" '
        'fill="#fff" fill-opacity="0.9" stroke="#000"/>',
        f'<polyline points="{_points(X(mu.real), Y(mu.imag))}" fill="none" stroke="#c03" stroke-width="1.5"/>',
    ]
    ex, ey = X(0.0), Y(0.0)
    out.append(f'<path d="M{_num(ex - 4)} {_num(ey - 4)}l8 8M{_num(ex - 4)} {_num(ey + 4)}l8 -8" stroke="#000"/>')
    out.append(f'<text x="{_num(x0 + 4)}" y="{_num(y0 + size - 4)}" font-size="10">mu(t)</text>')
    return out


def write_svg(text: str, path) -> None:
    with open(path, "w") as fh:
        fh.write(text)
