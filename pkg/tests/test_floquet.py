import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from moebius_floquet.core import MoebiusClass
from moebius_floquet.errors import IntegratorFailure
from moebius_floquet.floquet import (
    IntegratorOptions,
    classify_monodromy,
    evolution_operator,
    floquet_spectrum,
    fundamental_matrix,
    hill_solutions,
    is_floquet_ep,
    monodromy,
    monodromy_fixed_step,
    stroboscopic_eigenstates,
    trajectory,
)
from moebius_floquet.modulation import circular, constant, elliptical, quadratic_pair, rectangular
from moebius_floquet.sphere import chordal_distance
from moebius_floquet.static import polarisation


def presets():
    return [
        circular(0, 1),
        circular(1, 1),
        circular(0.700145 + 0.254176j, 1.357497),
        circular(0.25, 2, 4 * math.pi, b=1.3 - 0.2j, eta=0.4),
        elliptical(0.6, 1.5, 0, math.pi / 2),
        elliptical(2.0, 1.0, 0.8, math.pi / 2),
        quadratic_pair(0),
        quadratic_pair(1.2 + 0.3j),
        quadratic_pair(0.393399),
        rectangular(0.27 + 0.32j, 1, 1),
        rectangular(0.153, 1, 1),
        rectangular(2.394756696, 2, 0.6),
    ]


def ids(curves):
    return [f"{c.family}-{i}" for i, c in enumerate(curves)]


def rel(a, b):
    return np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)


@pytest.mark.parametrize("curve", presets(), ids=ids(presets()))
def test_floquet_relation(curve):
    T = curve.period
    M = monodromy(curve).m
    for f in (0.13, 0.5, 0.77):
        u_t = evolution_operator(curve, f * T).u
        u_tT = evolution_operator(curve, f * T + T).u
        assert rel(u_tT, u_t @ M) <= 1e-7


def random_curve(kind, delta_re, delta_im, rho, alpha):
    delta = complex(delta_re, delta_im)
    if kind == "circular":
        return circular(delta, rho)
    if kind == "elliptical":
        return elliptical(delta, rho, alpha, math.pi / 2)
    if kind == "rectangular":
        return rectangular(delta, rho, alpha)
    return quadratic_pair(delta, scale=rho)


@settings(max_examples=25)
@given(st.sampled_from(["circular", "elliptical", "rectangular", "quadratic"]), st.floats(-1, 3),
       st.floats(-0.5, 0.5), st.floats(0.1, 2), st.floats(0, 1), st.floats(0.05, 0.95))
def test_floquet_relation_random_curves(kind, delta_re, delta_im, rho, alpha, f):
    curve = random_curve(kind, delta_re, delta_im, rho, alpha)
    T = curve.period
    M = monodromy(curve).m
    u_t = evolution_operator(curve, f * T).u
    u_tT = evolution_operator(curve, f * T + T).u
    assert rel(u_tT, u_t @ M) <= 1e-7


@pytest.mark.parametrize("curve", presets(), ids=ids(presets()))
def test_unit_determinant_and_wronskian(curve):
    T = curve.period
    for t in np.linspace(0, 2 * T, 9)[1:]:
        u = evolution_operator(curve, t).u
        assert abs(np.linalg.det(u) - 1) <= 1e-8 * max(1, np.abs(u).max() ** 2)
        y = hill_solutions(curve, t)
        # Wronskian psi_a psi_b' - psi_b psi_a' stays 1
        assert abs(y[0, 0] * y[1, 1] - y[0, 1] * y[1, 0] - 1) <= 1e-8 * max(1, np.abs(y).max() ** 2)


def test_fundamental_matrix_at_zero_is_state_map():
    c = circular(0.3, 1, b=2, eta=0.5)
    psi = fundamental_matrix(c, 0).psi
    np.testing.assert_allclose(psi, [[1, 0], [-0.25, 0.5j]])


@pytest.mark.parametrize("curve", presets(), ids=ids(presets()))
def test_oracle_equivalence(curve):
    a = monodromy(curve).m
    b = monodromy_fixed_step(curve, 10_000).m
    assert rel(a, b) <= 1e-6


@settings(max_examples=30)
@given(st.floats(-1, 6), st.floats(0, 4), st.floats(0.2, 1.5), st.floats(0.5, 3))
def test_real_hill_coefficient_never_loxodromic(delta, rho, b, omega):
    m = monodromy(elliptical(delta, rho, 0, omega, b=b))
    assert abs(m.trace.imag) <= 1e-8 * max(1, abs(m.trace))
    assert classify_monodromy(m) is not MoebiusClass.LOXODROMIC


@settings(max_examples=20)
@given(st.floats(-1, 6), st.floats(0.1, 3), st.floats(0, 1))
def test_time_reversal_symmetric_curves_have_real_trace(delta, rho, alpha):
    # mu(-t) = conj(mu(t)) for real delta: the trace is real for any aspect ratio
    for c in (elliptical(delta, rho, alpha, math.pi / 2), rectangular(delta, rho, alpha)):
        m = monodromy(c)
        assert abs(m.trace.imag) <= 1e-8 * max(1, abs(m.trace))


@pytest.mark.parametrize("delta", [0.09, 0.25, 0.49, 0.3 + 0.2j, -0.4])
def test_circular_multipliers_match_static_case(delta):
    r = cmath.sqrt(delta)
    ref = None
    for rho in (0.3, 1.0, 2.0):
        for omega in (2 * math.pi, 4 * math.pi):
            c = circular(delta, rho, omega)
            T = c.period
            expected = sorted([cmath.exp(-1j * r * T), cmath.exp(1j * r * T)], key=lambda z: (round(z.imag, 6), round(z.real, 6)))
            mult = sorted(floquet_spectrum(monodromy(c)).multipliers, key=lambda z: (round(z.imag, 6), round(z.real, 6)))
            assert mult == pytest.approx(expected, abs=1e-8)
            if omega == 2 * math.pi:
                if ref is not None:
                    assert max(abs(a - b) / abs(b) for a, b in zip(mult, ref)) <= 1e-6
                ref = mult


def test_spectrum_fields():
    m = monodromy(circular(0.25, 1))
    s = floquet_spectrum(m)
    assert s.lambda_period == pytest.approx(2 * math.pi)
    for mult, nu, lam in zip(s.multipliers, s.exponents, s.lambdas):
        assert cmath.exp(nu * s.period) == pytest.approx(mult)
        assert lam == pytest.approx(1j * nu)
    assert sorted(x.real for x in s.lambdas) == pytest.approx([-0.5, 0.5], abs=1e-9)


def test_floquet_ep_examples():
    assert is_floquet_ep(monodromy(circular(0, 2, 4 * math.pi)))
    assert not is_floquet_ep(monodromy(circular(0.1, 1)))
    assert classify_monodromy(monodromy(circular(0, 0.5))) is MoebiusClass.PARABOLIC


def _quadratic_ep(guess=-0.006 - 0.083j):
    """Newton iteration on sigma(delta) = 4 for the quadratic family."""
    d = guess
    for _ in range(30):
        s = monodromy(quadratic_pair(d)).sigma - 4
        h = 1e-6
        ds = (monodromy(quadratic_pair(d + h)).sigma - 4 - s) / h
        step = s / ds
        d -= step
        if abs(step) < 1e-13:
            break
    return d


def test_quadratic_family_has_non_encircling_floquet_ep():
    d = _quadratic_ep()
    curve = quadratic_pair(d)
    m = monodromy(curve)
    assert abs(m.sigma - 4) < 1e-9
    assert is_floquet_ep(m)
    assert curve.winding_number(0) == 0


def test_quadratic_shifted_loop_is_loxodromic():
    assert classify_monodromy(monodromy(quadratic_pair(1.2 + 0.3j))) is MoebiusClass.LOXODROMIC


def test_quadratic_sigma_is_complex_on_real_axis():
    # the quadratic loop has no time-reversal symmetry, so sigma is generically
    # complex even for real delta
    for d in (0.0, 0.393399, 1.0):
        assert abs(monodromy(quadratic_pair(d)).sigma.imag) > 1e-3


def test_rectangular_reference_classes():
    assert classify_monodromy(monodromy(rectangular(0.27 + 0.32j, 1, 1))) is MoebiusClass.LOXODROMIC
    assert classify_monodromy(monodromy(rectangular(0.153, 1, 1))) is MoebiusClass.ELLIPTIC


def test_constant_modulation_is_pure_phase():
    c = constant(1.0, duration=1.3)
    s0 = np.array([1, 1]) / math.sqrt(2)  # eigenvector of sigma_x
    traj = trajectory(c, s0, n_periods=3, samples_per_period=40)
    np.testing.assert_allclose(np.linalg.norm(traj.states, axis=1), 1, atol=1e-9)
    np.testing.assert_allclose(traj.states[:, 0], np.exp(-1j * traj.times) / math.sqrt(2), atol=1e-9)


@pytest.mark.parametrize("curve", [circular(0.25, 1), rectangular(0.27 + 0.32j, 1, 1), quadratic_pair(0.393399)])
def test_stroboscopic_eigenstates_are_geometric(curve):
    m = monodromy(curve)
    spec = floquet_spectrum(m)
    for v, mult in zip(stroboscopic_eigenstates(m), spec.multipliers):
        traj = trajectory(curve, v, n_periods=4, samples_per_period=16)
        strobe = traj.stroboscopic
        for k in range(1, len(strobe)):
            np.testing.assert_allclose(strobe[k], mult * strobe[k - 1], atol=1e-8 * np.abs(strobe[k - 1]).max())


def test_centered_circle_eigenstate_cycles():
    c = circular(0, 1)
    m = monodromy(c)
    (v,) = stroboscopic_eigenstates(m)
    # degenerate multipliers are only sqrt(eps) accurate individually; use the trace
    mult = m.trace / 2
    assert abs(abs(mult) - 1) < 1e-9
    traj = trajectory(c, v, n_periods=3, samples_per_period=50)
    one = traj.states[:51]
    for k in (1, 2):
        np.testing.assert_allclose(traj.states[50 * k:50 * k + 51], mult ** k * one, atol=1e-8)


def test_parabolic_polarisation_approaches_eigenstate_as_one_over_n():
    c = circular(0, 1)
    m = monodromy(c)
    (v,) = stroboscopic_eigenstates(m)
    p_star = polarisation(v)
    traj = trajectory(c, (1, 0.3 + 0.2j), n_periods=400, samples_per_period=4)
    d = chordal_distance(np.array([polarisation(s) for s in traj.stroboscopic]), p_star)
    n = np.arange(len(d))
    # n * d(n) settles to a constant: O(1/n) decay
    tail = n[100:] * d[100:]
    assert tail.max() / tail.min() < 1.1
    assert d[-1] < d[100] / 3


def test_generic_state_on_centered_circle_grows_linearly():
    c = circular(0, 1)
    traj = trajectory(c, (1, 0.3), n_periods=60, samples_per_period=2)
    amp = np.linalg.norm(traj.stroboscopic, axis=1)
    steps = np.diff(amp[20:])
    assert steps.std() / steps.mean() < 0.05


def test_trajectory_validation():
    with pytest.raises(ValueError):
        trajectory(circular(0, 1), (1, 0), n_periods=0)


def test_integrator_failure_raised():
    opts = IntegratorOptions(rel_tol=1e-14, abs_tol=1e-300, max_step=1e-16, initial_step=1e-16)
    with pytest.raises(IntegratorFailure):
        monodromy(circular(0, 1), opts)
