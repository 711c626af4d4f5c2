"""CSV, JSON and binary output, with readers for round trips.

Every CSV starts with one ``#`` line holding JSON metadata (what is needed to
rebuild the object that produced it), then a header row.  Floats are written
with ``repr`` so they parse back bit for bit, and rows are emitted in a fixed
order, so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
import struct
from dataclasses import asdict

import numpy as np

from .core import Hamiltonian2, MoebiusClass
from .floquet import FloquetTrajectory, IntegratorOptions, Monodromy, classify_monodromy, floquet_spectrum, is_floquet_ep
from .static import Portrait
from .sweep import UNRESOLVED, Axis, ClassGrid, SweepSpec

PORTRAIT_COLUMNS = ("sample_id", "step", "t", "re_p", "im_p", "sphere_x", "sphere_y", "sphere_z")
TRAJECTORY_COLUMNS = ("component", "step", "t", "re", "im")
GRID_COLUMNS = ("delta", "rho", "class", "re_sigma", "im_sigma")
GRID_MAGIC = b"MFGRID1\x00"


def _f(x) -> str:
    return repr(float(x))


def cpair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def from_pair(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _write_table(path, meta: dict, columns, rows):
    with open(path, "w", newline="") as fh:
        fh.write("# " + json.dumps(meta, sort_keys=True) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)


def _read_table(path, columns):
    with open(path, newline="") as fh:
        first = fh.readline()
        if not first.startswith("#"):
            raise ValueError(f"{path}: missing metadata line")
        meta = json.loads(first[1:])
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != tuple(columns):
            raise ValueError(f"{path}: unexpected columns {header}")
        rows = list(reader)
    return meta, rows


def hamiltonian_to_dict(h: Hamiltonian2) -> dict:
    return {k: cpair(getattr(h, k)) for k in ("tau", "eta", "b", "mu")}


def hamiltonian_from_dict(d: dict) -> Hamiltonian2:
    return Hamiltonian2(**{k: from_pair(d[k]) for k in ("tau", "eta", "b", "mu")})


# -- portraits ---------------------------------------------------------------

def write_portrait_csv(portrait: Portrait, path) -> None:
    meta = {
        "kind": "portrait",
        "hamiltonian": hamiltonian_to_dict(portrait.hamiltonian),
        "markers": [cpair(m) for m in portrait.markers],
    }
    times = portrait.times

    def rows():
        for i in range(portrait.p.shape[0]):
            for k, t in enumerate(times):
                p = portrait.p[i, k]
                x, y, z = portrait.sphere[i, k]
                yield (i, k, _f(t), _f(p.real), _f(p.imag), _f(x), _f(y), _f(z))

    _write_table(path, meta, PORTRAIT_COLUMNS, rows())


def read_portrait_csv(path) -> Portrait:
    meta, rows = _read_table(path, PORTRAIT_COLUMNS)
    n = 1 + max(int(r[0]) for r in rows)
    m = 1 + max(int(r[1]) for r in rows)
    times = np.empty(m)
    p = np.empty((n, m), dtype=complex)
    sphere = np.empty((n, m, 3))
    for r in rows:
        i, k = int(r[0]), int(r[1])
        times[k] = float(r[2])
        p[i, k] = complex(float(r[3]), float(r[4]))
        sphere[i, k] = [float(r[5]), float(r[6]), float(r[7])]
    return Portrait(
        hamiltonian_from_dict(meta["hamiltonian"]), times, p, sphere,
        [from_pair(v) for v in meta["markers"]],
    )


# -- Floquet trajectories ------------------------------------------------------

def write_trajectory_csv(traj: FloquetTrajectory, path) -> None:
    meta = {"kind": "trajectory", "period": traj.period, "samples_per_period": traj.samples_per_period}

    def rows():
        for c in range(2):
            for k, t in enumerate(traj.times):
                z = traj.states[k, c]
                yield (c + 1, k, _f(t), _f(z.real), _f(z.imag))

    _write_table(path, meta, TRAJECTORY_COLUMNS, rows())


def read_trajectory_csv(path) -> FloquetTrajectory:
    meta, rows = _read_table(path, TRAJECTORY_COLUMNS)
    n = 1 + max(int(r[1]) for r in rows)
    times = np.empty(n)
    states = np.empty((n, 2), dtype=complex)
    for r in rows:
        c, k = int(r[0]) - 1, int(r[1])
        times[k] = float(r[2])
        states[k, c] = complex(float(r[3]), float(r[4]))
    return FloquetTrajectory(times, states, float(meta["period"]), int(meta["samples_per_period"]))


# -- spectra ---------------------------------------------------------------

def spectrum_report(m: Monodromy, tol: float | None = None) -> dict:
    """JSON-ready summary of a monodromy matrix."""
    kw = {} if tol is None else {"tol": tol}
    spec = floquet_spectrum(m)
    return {
        "class": classify_monodromy(m, **kw).value,
        "is_floquet_ep": is_floquet_ep(m, **kw),
        "multipliers": [cpair(z) for z in spec.multipliers],
        "exponents": [cpair(z) for z in spec.exponents],
        "lambda": [cpair(z) for z in spec.lambdas],
        "lambda_period": spec.lambda_period,
        "lambda_note": "lambda is defined modulo lambda_period = 2 pi / T",
        "period": m.period,
        "trace": cpair(m.trace),
        "sigma": cpair(m.sigma),
        "det_residual": m.det_residual(),
        "monodromy": [[cpair(z) for z in row] for row in m.m],
    }


def write_json(obj: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- sweep grids ---------------------------------------------------------------

def spec_to_dict(spec: SweepSpec) -> dict:
    return {
        "family": spec.family,
        "delta_axis": [spec.delta_axis.start, spec.delta_axis.stop, spec.delta_axis.count],
        "rho_axis": [spec.rho_axis.start, spec.rho_axis.stop, spec.rho_axis.count],
        "alpha": spec.alpha,
        "b": cpair(spec.b),
        "eta": cpair(spec.eta),
        "omega": spec.omega,
        "time_scale": spec.time_scale,
        "delta_imag": spec.delta_imag,
        "tol": spec.tol,
        "options": asdict(spec.options),
    }


def spec_from_dict(d: dict) -> SweepSpec:
    return SweepSpec(
        family=d["family"],
        delta_axis=Axis(*d["delta_axis"]),
        rho_axis=Axis(*d["rho_axis"]),
        alpha=d["alpha"],
        b=from_pair(d["b"]),
        eta=from_pair(d["eta"]),
        omega=d["omega"],
        time_scale=d["time_scale"],
        delta_imag=d["delta_imag"],
        tol=d["tol"],
        options=IntegratorOptions(**d["options"]),
    )


def class_name(code: int) -> str:
    return "Unresolved" if code == UNRESOLVED else MoebiusClass.from_code(code).value


def class_code(name: str) -> int:
    return UNRESOLVED if name == "Unresolved" else MoebiusClass(name).code


def write_grid_csv(grid: ClassGrid, path) -> None:
    meta = {"kind": "grid", "spec": spec_to_dict(grid.spec)}
    delta, rho = grid.delta, grid.rho

    def rows():
        for i, r in enumerate(rho):
            for j, d in enumerate(delta):
                s = grid.sigma[i, j]
                yield (_f(d), _f(r), class_name(int(grid.classes[i, j])), _f(s.real), _f(s.imag))

    _write_table(path, meta, GRID_COLUMNS, rows())


def read_grid_csv(path) -> ClassGrid:
    meta, rows = _read_table(path, GRID_COLUMNS)
    spec = spec_from_dict(meta["spec"])
    n_rho, n_delta = spec.shape
    if len(rows) != n_rho * n_delta:
        raise ValueError(f"{path}: expected {n_rho * n_delta} rows, found {len(rows)}")
    classes = np.array([class_code(r[2]) for r in rows], dtype=np.uint8).reshape(n_rho, n_delta)
    sigma = np.array([complex(float(r[3]), float(r[4])) for r in rows]).reshape(n_rho, n_delta)
    return ClassGrid(spec, classes, sigma)


def write_grid_binary(grid: ClassGrid, path) -> None:
    """Little-endian layout: magic, ``uint32`` rows and columns, ``float64``
    delta then rho axis values, row-major class bytes, then row-major sigma
    as ``(re, im)`` ``float64`` pairs."""
    n_rho, n_delta = grid.classes.shape
    with open(path, "wb") as fh:
        fh.write(GRID_MAGIC)
        fh.write(struct.pack("<II", n_rho, n_delta))
        fh.write(np.asarray(grid.delta, dtype="<f8").tobytes())
        fh.write(np.asarray(grid.rho, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(grid.classes, dtype=np.uint8).tobytes())
        pairs = np.stack([grid.sigma.real, grid.sigma.imag], axis=-1)
        fh.write(np.ascontiguousarray(pairs, dtype="<f8").tobytes())


def read_grid_binary(path) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """``(delta, rho, classes, sigma)`` from :func:`write_grid_binary` output."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(GRID_MAGIC):
        raise ValueError(f"{path}: not a grid file")
    off = len(GRID_MAGIC)
    n_rho, n_delta = struct.unpack_from("<II", data, off)
    off += 8
    delta = np.frombuffer(data, "<f8", n_delta, off).astype(float)
    off += 8 * n_delta
    rho = np.frombuffer(data, "<f8", n_rho, off).astype(float)
    off += 8 * n_rho
    classes = np.frombuffer(data, np.uint8, n_rho * n_delta, off).reshape(n_rho, n_delta).copy()
    off += n_rho * n_delta
    pairs = np.frombuffer(data, "<f8", 2 * n_rho * n_delta, off).reshape(n_rho, n_delta, 2)
    off += 16 * n_rho * n_delta
    if off != len(data):
        raise ValueError(f"{path}: trailing bytes")
    return delta, rho, classes, pairs[..., 0] + 1j * pairs[..., 1]
