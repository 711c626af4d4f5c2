"""Stability diagrams: Moebius class of the monodromy over a (delta, rho) grid.

Rows of the grid run along ``rho`` (vertical axis), columns along real
``delta`` (horizontal axis).  Cells are independent; rows are split into
contiguous blocks, one per worker, and results are written back by index so
the grid does not depend on the schedule.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import MoebiusClass
from .errors import IntegratorFailure, SingularMatrix
from .floquet import DEFAULT_OPTIONS, FLOQUET_TOL, IntegratorOptions, classify_monodromy, monodromy
from .modulation import circular, elliptical, quadratic_pair, rectangular

#: class code of a cell whose integration failed
UNRESOLVED = 255
#: modulation frequency of the smooth families in a sweep; period 4 like the
#: rectangular curve, and three Mathieu tongue tips fall inside the default range
SWEEP_OMEGA = math.pi / 2
FAMILY_NAMES = ("rectangular", "elliptical", "circular", "quadratic")


@dataclass(frozen=True)
class Axis:
    """``count`` evenly spaced values from ``start`` to ``stop`` inclusive."""

    start: float
    stop: float
    count: int

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "count", int(self.count))
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValueError("axis range must be finite")
        if not self.start < self.stop:
            raise ValueError("axis needs start < stop")
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.count - 1)


@dataclass(frozen=True)
class SweepSpec:
    """One stability diagram.

    ``delta_imag`` shifts the whole delta axis off the real line (default 0).
    For the quadratic family ``rho`` scales the loop about ``delta``.
    ``omega`` applies to circular and elliptical curves, ``time_scale`` to
    quadratic and rectangular ones.
    """

    family: str
    delta_axis: Axis = Axis(-1.0, 6.0, 400)
    rho_axis: Axis = Axis(0.0, 4.0, 300)
    alpha: float = 0.0
    b: complex = 1 + 0j
    eta: complex = 0j
    omega: float = SWEEP_OMEGA
    time_scale: float = 1.0
    delta_imag: float = 0.0
    tol: float = FLOQUET_TOL
    options: IntegratorOptions = field(default=DEFAULT_OPTIONS)

    def __post_init__(self):
        if self.family not in FAMILY_NAMES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILY_NAMES}")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.rho_axis.start < 0:
            raise ValueError("rho axis must be non-negative")
        object.__setattr__(self, "b", complex(self.b))
        object.__setattr__(self, "eta", complex(self.eta))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rho_axis.count, self.delta_axis.count

    def curve(self, delta: float, rho: float):
        d = complex(delta, self.delta_imag)
        if self.family == "rectangular":
            return rectangular(d, rho, self.alpha, self.b, self.eta, self.time_scale)
        if self.family == "elliptical":
            return elliptical(d, rho, self.alpha, self.omega, self.b, self.eta)
        if self.family == "circular":
            return circular(d, rho, self.omega, self.b, self.eta)
        return quadratic_pair(d, self.b, self.eta, self.time_scale, scale=rho)


@dataclass(frozen=True, eq=False)
class ClassGrid:
    """``classes[i, j]`` holds the :attr:`MoebiusClass.code` (or
    :data:`UNRESOLVED`) at ``rho[i]``, ``delta[j]``; ``sigma`` likewise
    (NaN where unresolved)."""

    spec: SweepSpec
    classes: np.ndarray
    sigma: np.ndarray

    @property
    def delta(self) -> np.ndarray:
        return self.spec.delta_axis.values()

    @property
    def rho(self) -> np.ndarray:
        return self.spec.rho_axis.values()

    def class_at(self, i: int, j: int):
        code = int(self.classes[i, j])
        return None if code == UNRESOLVED else MoebiusClass.from_code(code)

    def mask(self, cls: MoebiusClass) -> np.ndarray:
        return self.classes == cls.code

    @property
    def unresolved(self) -> np.ndarray:
        return self.classes == UNRESOLVED

    def counts(self) -> dict:
        out = {c.value: int(np.count_nonzero(self.mask(c))) for c in MoebiusClass}
        out["Unresolved"] = int(np.count_nonzero(self.unresolved))
        return out

    def fraction(self, cls: MoebiusClass) -> float:
        return float(np.count_nonzero(self.mask(cls))) / self.classes.size

    def same_as(self, other: "ClassGrid") -> bool:
        """Exact equality of class codes and sigma bits."""
        return (
            self.classes.shape == other.classes.shape
            and np.array_equal(self.classes, other.classes)
            and self.sigma.tobytes() == other.sigma.tobytes()
        )


def classify_cell(spec: SweepSpec, delta: float, rho: float) -> tuple[int, complex]:
    """``(class_code, sigma)`` for one cell; failures give ``UNRESOLVED``."""
    try:
        m = monodromy(spec.curve(delta, rho), spec.options)
        sigma = m.sigma
        if not (math.isfinite(sigma.real) and math.isfinite(sigma.imag)):
            return UNRESOLVED, complex(math.nan, math.nan)
        return classify_monodromy(m, spec.tol).code, sigma
    except (IntegratorFailure, SingularMatrix, OverflowError, FloatingPointError):
        return UNRESOLVED, complex(math.nan, math.nan)


def _run_rows(spec: SweepSpec, r0: int, r1: int):
    deltas = spec.delta_axis.values()
    rhos = spec.rho_axis.values()[r0:r1]
    classes = np.empty((len(rhos), len(deltas)), dtype=np.uint8)
    sigma = np.empty((len(rhos), len(deltas)), dtype=complex)
    for i, rho in enumerate(rhos):
        for j, d in enumerate(deltas):
            classes[i, j], sigma[i, j] = classify_cell(spec, float(d), float(rho))
    return r0, classes, sigma


def row_blocks(n_rows: int, workers: int) -> list[tuple[int, int]]:
    """Static partition of ``range(n_rows)`` into at most ``workers`` blocks."""
    workers = max(1, min(workers, n_rows))
    edges = np.linspace(0, n_rows, workers + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def default_workers() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> ClassGrid:
    """Classify every cell of ``spec``; ``workers`` defaults to the CPUs available."""
    workers = default_workers() if workers is None else int(workers)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    n_rows, n_cols = spec.shape
    classes = np.empty((n_rows, n_cols), dtype=np.uint8)
    sigma = np.empty((n_rows, n_cols), dtype=complex)
    blocks = row_blocks(n_rows, workers)
    if len(blocks) == 1:
        results = [_run_rows(spec, *blocks[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(blocks)) as pool:
            futures = [pool.submit(_run_rows, spec, a, b) for a, b in blocks]
            results = [f.result() for f in futures]
    for r0, c, s in results:
        classes[r0:r0 + len(c)] = c
        sigma[r0:r0 + len(s)] = s
    return ClassGrid(spec, classes, sigma)


@dataclass(frozen=True, eq=False)
class BoundarySet:
    """Boundary points between two classes, as ``(delta, rho)`` rows."""

    classes: tuple
    points: np.ndarray


def _bisect_edge(spec, fixed, lo, hi, axis, f_lo, tol):
    """Bisect ``Re(sigma) - 4`` along one grid edge."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        d, r = (mid, fixed) if axis == 1 else (fixed, mid)
        code, s = classify_cell(spec, d, r)
        if code == UNRESOLVED:
            break
        f_mid = s.real - 4
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def extract_boundaries(grid: ClassGrid, refine: bool = False, tol: float = 1e-6) -> list[BoundarySet]:
    """Edges between neighbouring cells of different class.

    Points are edge midpoints.  With ``refine``, an edge across which
    ``Re(sigma) - 4`` changes sign is bisected to ``tol`` in parameter
    space.  Unresolved cells take no part.  Sets are ordered by class pair.
    """
    c = grid.classes
    delta, rho = grid.delta, grid.rho
    spec = grid.spec
    found: dict[tuple, list] = {}

    def add(a, b, point):
        key = tuple(sorted((int(a), int(b))))
        found.setdefault(key, []).append(point)

    for axis in (1, 0):
        a = c[:, :-1] if axis == 1 else c[:-1, :]
        b = c[:, 1:] if axis == 1 else c[1:, :]
        sa = grid.sigma[:, :-1] if axis == 1 else grid.sigma[:-1, :]
        sb = grid.sigma[:, 1:] if axis == 1 else grid.sigma[1:, :]
        edge = (a != b) & (a != UNRESOLVED) & (b != UNRESOLVED)
        for i, j in zip(*np.nonzero(edge)):
            if axis == 1:
                lo, hi, fixed = delta[j], delta[j + 1], rho[i]
            else:
                lo, hi, fixed = rho[i], rho[i + 1], delta[j]
            x = 0.5 * (lo + hi)
            f_lo, f_hi = sa[i, j].real - 4, sb[i, j].real - 4
            if refine and f_lo * f_hi < 0:
                x = _bisect_edge(spec, fixed, lo, hi, axis, f_lo, tol)
            point = (x, fixed) if axis == 1 else (fixed, x)
            add(a[i, j], b[i, j], point)
    out = []
    for key in sorted(found):
        pts = np.array(sorted(found[key]), dtype=float)
        out.append(BoundarySet(tuple(MoebiusClass.from_code(k) for k in key), pts))
    return out


def label_regions(grid: ClassGrid, cls: MoebiusClass, diagonal: bool = False):
    """Connected components of the cells of class ``cls``: ``(labels, n)``.

    ``diagonal`` joins cells that touch at a corner (8-connectivity), which
    keeps thin slanted tongues in one piece.
    """
    from scipy import ndimage

    structure = np.ones((3, 3), dtype=bool) if diagonal else None
    labels, n = ndimage.label(grid.mask(cls), structure=structure)
    return labels, int(n)


def tongues_at_axis(grid: ClassGrid, cls: MoebiusClass = MoebiusClass.HYPERBOLIC,
                    rho_max: float | None = None, delta_min: float = 0.0,
                    merge_cols: int = 3) -> list[dict]:
    """Tongues of ``cls`` rooted near the ``rho = 0`` axis.

    Tongue tips are infinitely thin, so a tongue first shows on a grid some
    rows above the axis and may break into fragments where it is narrower
    than a cell.  Regions are 8-connected components; one counts when its
    lowest row lies at ``rho <= rho_max`` (default: middle of the rho axis)
    and reaches ``delta > delta_min`` there.  Regions whose base deltas lie
    within ``merge_cols`` grid columns are one tongue.  Returns one dict per
    tongue, ordered by base delta.
    """
    labels, n = label_regions(grid, cls, diagonal=True)
    rho, delta = grid.rho, grid.delta
    if rho_max is None:
        rho_max = 0.5 * (rho[0] + rho[-1])
    found = []
    for k in range(1, n + 1):
        rows, cols = np.nonzero(labels == k)
        low = rows.min()
        if rho[low] > rho_max:
            continue
        base = delta[cols[rows == low]]
        if base.max() <= delta_min:
            continue
        found.append({
            "labels": [k],
            "cells": int(rows.size),
            "rho_min": float(rho[low]),
            "delta_base": float(base.mean()),
        })
    found.sort(key=lambda t: t["delta_base"])
    gap = merge_cols * grid.spec.delta_axis.step
    out = []
    for t in found:
        if out and t["delta_base"] - out[-1]["delta_base"] <= gap:
            prev = out[-1]
            prev["labels"] += t["labels"]
            prev["cells"] += t["cells"]
            if t["rho_min"] < prev["rho_min"]:
                prev["rho_min"], prev["delta_base"] = t["rho_min"], t["delta_base"]
            continue
        out.append(t)
    return out
