"""Acceptance criteria 1-10, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
"acceptance criteria" section at the end of the pytest report.
"""
import cmath
import math
import os
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import record
from moebius_floquet import render, serialize
from moebius_floquet.cli import CURVE_PRESETS
from moebius_floquet.core import Hamiltonian2, MoebiusClass, classify_hamiltonian
from moebius_floquet.floquet import floquet_spectrum, is_floquet_ep, monodromy, monodromy_fixed_step
from moebius_floquet.modulation import FAMILIES, circular, quadratic_pair, rectangular
from moebius_floquet.sphere import chordal_distance
from moebius_floquet.static import polarisation_flow, propagator
from moebius_floquet.sweep import Axis, SweepSpec, run_sweep, tongues_at_axis

HERE = os.path.dirname(os.path.abspath(__file__))
TARGET_DELTA = 2.394756696


def log_uniform_complex(rng, n, lo=1e-2, hi=1e2):
    mag = 10 ** rng.uniform(math.log10(lo), math.log10(hi), n)
    return mag * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def log_uniform_real(rng, n, lo=1e-2, hi=1e2):
    return 10 ** rng.uniform(math.log10(lo), math.log10(hi), n) * rng.choice([-1.0, 1.0], n)


def rel(a, b):
    return np.linalg.norm(a - b) / np.linalg.norm(b)


def test_criterion_1_static_ep_propagator():
    rng = np.random.default_rng(1)
    # tau is real: a complex tau of modulus 100 at t = 10 overflows exp(-i tau t)
    taus = log_uniform_real(rng, 50)
    etas, bs = log_uniform_complex(rng, 50), log_uniform_complex(rng, 50)
    worst = 0.0
    start = time.perf_counter()
    for tau, eta, b in zip(taus, etas, bs):
        h = Hamiltonian2(tau, eta, b, 0)
        N = np.array([[eta, b], [-eta * eta / b, -eta]])
        for t in (0.1, 1.0, 10.0):
            expected = cmath.exp(-1j * tau * t) * (np.eye(2) - 1j * t * N)
            worst = max(worst, rel(propagator(h, t).u, expected))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 1.0
    record(1, ok, f"max rel err {worst:.2e} (tol 1e-10), {elapsed:.3f} s (limit 1 s)")
    assert ok


def test_criterion_2_long_time_polarisation():
    rng = np.random.default_rng(2)
    worst, count = 0.0, 0
    start = time.perf_counter()
    while count < 20:
        tau = log_uniform_real(rng, 1)[0]
        eta, b, mu = log_uniform_complex(rng, 3)
        bmu = b * mu
        if abs(bmu.imag) <= 1e-6 * abs(bmu):
            continue  # not loxodromic
        count += 1
        h = Hamiltonian2(tau, eta, b, mu)
        r = np.sqrt(bmu)
        r_dom = r if r.imag > 0 else -r
        target = (-eta + r_dom) / b
        repulsive = (-eta - r_dom) / b
        t = 50 / abs(r.imag)
        p0 = []
        while len(p0) < 20:
            z, phi = rng.uniform(-1, 1), rng.uniform(0, 2 * np.pi)
            p = math.sqrt((1 - z) / (1 + z)) * cmath.exp(1j * phi)
            if chordal_distance(p, repulsive) > 1e-3:
                p0.append(p)
        pt = polarisation_flow(h, t, np.array(p0))
        worst = max(worst, float(np.max(chordal_distance(pt, target))))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-6 and elapsed < 5.0
    record(2, ok, f"max chordal distance {worst:.2e} (tol 1e-6), {elapsed:.3f} s (limit 5 s)")
    assert ok


def test_criterion_3_class_table():
    rng = np.random.default_rng(3)
    mags = 10 ** rng.uniform(-2, 2, 1000)
    values = np.concatenate([
        mags[:400] * np.exp(1j * rng.uniform(-np.pi, np.pi, 400)),   # generic
        mags[400:650],                                              # positive real
        -mags[650:900],                                             # negative real
        mags[900:950] * np.exp(1j * rng.choice([-1, 1], 50) * 1e-6),  # just off the axis
        np.zeros(50),
    ])
    bs = log_uniform_complex(rng, values.size)
    mismatches, parabolic_elsewhere = 0, 0
    for v, b in zip(values, bs):
        if v == 0:
            expected = MoebiusClass.PARABOLIC
        elif v.imag != 0:
            expected = MoebiusClass.LOXODROMIC
        else:
            expected = MoebiusClass.ELLIPTIC if v.real > 0 else MoebiusClass.HYPERBOLIC
        got = classify_hamiltonian(Hamiltonian2(0, 0.3, b, v / b))
        mismatches += got is not expected
        parabolic_elsewhere += got is MoebiusClass.PARABOLIC and v != 0
    ok = mismatches == 0 and parabolic_elsewhere == 0
    record(3, ok, f"{mismatches} mismatches in {values.size} points, parabolic off b*mu=0: {parabolic_elsewhere}")
    assert ok


def test_criterion_4_circular_floquet_eigenvalues():
    start = time.perf_counter()
    worst_err, worst_spread = 0.0, 0.0
    for delta in (0.09, 0.25, 0.49):
        lams = []
        for rho in (0.3, 1.0, 2.0):
            lam = sorted(floquet_spectrum(monodromy(circular(delta, rho, 2 * math.pi))).lambdas, key=lambda z: z.real)
            lams.append(lam)
            expected = [-math.sqrt(delta), math.sqrt(delta)]
            worst_err = max(worst_err, max(abs(a - e) for a, e in zip(lam, expected)))
        lams = np.array(lams)
        worst_spread = max(worst_spread, float(np.max(np.abs(lams - lams[0]))))
    elapsed = time.perf_counter() - start
    ok = worst_err <= 1e-6 and worst_spread <= 1e-6 and elapsed < 10
    record(4, ok, f"max |lambda - sqrt(delta)| {worst_err:.2e}, spread over rho {worst_spread:.2e} "
                  f"(tol 1e-6), {elapsed:.2f} s (limit 10 s)")
    assert ok


def test_criterion_5_floquet_ep_by_centering():
    centred = {(rho, om): is_floquet_ep(monodromy(circular(0, rho, om)))
               for rho in (0.5, 1.0, 2.0) for om in (2 * math.pi, 4 * math.pi)}
    off = is_floquet_ep(monodromy(circular(0.1, 1.0)))
    ok = all(centred.values()) and not off
    record(5, ok, f"centred EP for {sum(centred.values())}/6 (rho, omega); off-centre delta=0.1 EP: {off}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the quadratic loop at delta=0 has sigma = 3.76-1.31i, "
                                       "not 4: no Floquet EP on this loop")
def test_criterion_6a_quadratic_ep_without_encircling():
    curve = quadratic_pair(0)
    m = monodromy(curve)
    winding = curve.winding_number(0)
    ep = is_floquet_ep(m)
    ok = ep and winding == 0
    record(6, ok, f"quadratic delta=0: winding {winding}, sigma {m.sigma:.4f}, is_floquet_ep {ep}", "6a")
    assert winding == 0
    assert ep


def _sigma4_roots(rho, alpha, lo, hi, n):
    def f(d):
        return monodromy(rectangular(d, rho, alpha)).sigma.real - 4

    ds = np.linspace(lo, hi, n)
    v = [f(d) for d in ds]
    return [brentq(f, ds[k], ds[k + 1], xtol=1e-12)
            for k in range(n - 1) if np.sign(v[k]) != np.sign(v[k + 1])]


def _scan(rhos, alphas, lo, hi, n):
    return sorted((abs(d - TARGET_DELTA), float(r), float(a), d)
                  for r in rhos for a in alphas for d in _sigma4_roots(r, a, lo, hi, n))


def test_criterion_6b_rectangular_distant_ep():
    # coarse (rho, alpha) grid, then a finer grid around the best node
    coarse = _scan(np.arange(0.5, 3.01, 0.5), (0.25, 0.5, 0.75, 1.0), 2.3, 2.5, 21)
    _, r0, a0, _ = coarse[0]
    fine = _scan(np.linspace(r0 - 0.25, r0 + 0.25, 11), np.linspace(a0 - 0.125, a0 + 0.125, 11),
                 TARGET_DELTA - 0.03, TARGET_DELTA + 0.03, 7)
    _, rho, alpha, _ = fine[0]
    # with (rho*, alpha*) fixed, locate the parabolic point again by a 1-D scan over delta
    roots = _sigma4_roots(rho, alpha, 2.3, 2.5, 41)
    delta = min(roots, key=lambda d: abs(d - TARGET_DELTA))
    curve = rectangular(delta, rho, alpha)
    ep = is_floquet_ep(monodromy(curve))
    winding = curve.winding_number(0)
    gap = float(np.min(np.abs(curve.sample(4096)[1])))
    err = abs(delta - TARGET_DELTA)
    ok = err <= 1e-3 and ep and winding == 0 and gap > 1.0
    record(6, ok, f"rectangular: coarse best (rho, alpha)=({r0:g}, {a0:g}) delta={coarse[0][3]:.6f}; "
                  f"fixed (rho*, alpha*)=({rho:g}, {alpha:g}) gives parabolic delta={delta:.9f}, "
                  f"|err| {err:.1e} (tol 1e-3), is_floquet_ep {ep}, winding {winding}, "
                  f"min |mu| on curve {gap:.2f}", "6b")
    assert ok


def test_criterion_7_oracle_equivalence():
    start = time.perf_counter()
    errs = {}
    for name, (family, params) in CURVE_PRESETS.items():
        curve = FAMILIES[family](**params)
        errs[name] = rel(monodromy(curve).m, monodromy_fixed_step(curve, 10_000).m)
    elapsed = time.perf_counter() - start
    worst = max(errs, key=errs.get)
    ok = errs[worst] <= 1e-6 and elapsed < 30
    record(7, ok, f"{len(errs)} presets, max rel diff {errs[worst]:.2e} ({worst}; tol 1e-6), "
                  f"{elapsed:.2f} s (limit 30 s)")
    assert ok


@pytest.fixture(scope="module")
def strutt_grids():
    start = time.perf_counter()
    axes = dict(delta_axis=Axis(0, 6, 200), rho_axis=Axis(0, 4, 150))
    grids = {
        "elliptical-0": run_sweep(SweepSpec("elliptical", alpha=0.0, **axes)),
        "elliptical-0.8": run_sweep(SweepSpec("elliptical", alpha=0.8, **axes)),
        "circular": run_sweep(SweepSpec("circular", alpha=1.0, delta_axis=Axis(-1, 6, 200), rho_axis=Axis(0, 4, 150))),
    }
    return grids, time.perf_counter() - start


@pytest.mark.slow
def test_criterion_8_stability_diagrams(strutt_grids):
    grids, elapsed = strutt_grids
    g0 = grids["elliptical-0"]
    tongues = tongues_at_axis(g0, MoebiusClass.HYPERBOLIC)
    bases = [round(t["delta_base"], 3) for t in tongues]
    ok_a = len(tongues) >= 3
    gc = grids["circular"]
    bad_cols = 0
    for j in range(gc.classes.shape[1]):
        col = gc.classes[:, j]
        bad_cols += not np.all(col == col[0])
    ok_b = bad_cols == 0
    f0, f8 = g0.fraction(MoebiusClass.ELLIPTIC), grids["elliptical-0.8"].fraction(MoebiusClass.ELLIPTIC)
    ok_c = f8 >= f0
    unresolved = sum(g.counts()["Unresolved"] for g in grids.values())
    workers = os.cpu_count()
    ok = ok_a and ok_b and ok_c and elapsed < 300 and unresolved == 0
    record(8, ok, f"(a) {len(tongues)} tongues at delta {bases}; (b) {bad_cols} non-constant circular columns; "
                  f"(c) stable fraction {f0:.3f} (alpha=0) -> {f8:.3f} (alpha=0.8); "
                  f"3 grids of 200x150 in {elapsed:.1f} s on {workers} CPU(s) (limit 300 s), "
                  f"{unresolved} unresolved")
    assert ok


def _sweep_bytes(grid, directory):
    os.makedirs(directory, exist_ok=True)
    serialize.write_grid_csv(grid, os.path.join(directory, "g.csv"))
    serialize.write_grid_binary(grid, os.path.join(directory, "g.bin"))
    render.write_svg(render.stability_svg(grid), os.path.join(directory, "g.svg"))
    out = {}
    for name in sorted(os.listdir(directory)):
        with open(os.path.join(directory, name), "rb") as fh:
            out[name] = fh.read()
    return out


def test_criterion_9_determinism(tmp_path):
    spec = SweepSpec("rectangular", Axis(-1, 6, 48), Axis(0, 4, 32), alpha=0.5)
    outputs = {w: _sweep_bytes(run_sweep(spec, w), tmp_path / str(w)) for w in (1, 4, 8)}
    same = outputs[1] == outputs[4] == outputs[8]
    record(9, same, f"csv/bin/svg outputs byte-identical for workers 1, 4, 8: {same}")
    assert same


PROPERTY_TESTS = {
    "Floquet relation": "test_floquet_relation",
    "det U = 1": "test_unit_determinant_and_wronskian",
    "Wronskian": "test_unit_determinant_and_wronskian",
    "Moebius/state": "test_moebius_matches_state_evolution",
    "real coefficient": "test_real_hill_coefficient_never_loxodromic",
}


def test_criterion_10_property_suites():
    selector = " or ".join(sorted(set(PROPERTY_TESTS.values())))
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         os.path.join(HERE, "test_floquet.py"), os.path.join(HERE, "test_static.py"), "-k", selector],
        capture_output=True, text=True, cwd=HERE,
    )
    summary = proc.stdout.strip().splitlines()[-1]
    ok = proc.returncode == 0 and "failed" not in summary and "passed" in summary
    record(10, ok, f"{', '.join(PROPERTY_TESTS)}: {summary}")
    assert ok, proc.stdout[-2000:]
