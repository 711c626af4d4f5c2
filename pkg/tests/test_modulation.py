import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from moebius_floquet.modulation import (
    FAMILIES,
    ModulationCurve,
    Segment,
    SegmentKind,
    circular,
    constant,
    custom,
    elliptical,
    quadratic_pair,
    rectangular,
)

deltas = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
rhos = st.floats(0.01, 4)
alphas = st.floats(0, 2)


def builtins():
    return [
        circular(0, 1),
        circular(0.700145 + 0.254176j, 1.357497),
        circular(1, 1, 4 * math.pi),
        elliptical(0.5, 1.5, 0.3, math.pi / 2),
        elliptical(1, 1, 0),
        quadratic_pair(0),
        quadratic_pair(1.2 + 0.3j, time_scale=2.5),
        rectangular(0.27 + 0.32j, 1, 1),
        rectangular(2, 2, 0.6, time_scale=0.5),
        rectangular(0, 2, 0),
    ]


def test_mu_at_examples():
    assert circular(0, 1).mu_at(0) == pytest.approx(1)
    assert abs(circular(1, 1).mu_at(0.5)) < 1e-15
    assert rectangular(0, 2, 1).mu_at(0) == -1 + 1j
    assert elliptical(1, 1, 0).mu_at(0.25) == pytest.approx(1, abs=1e-15)
    assert elliptical(0, 1, 0.8).mu_at(0) == pytest.approx(1)


def test_quadratic_formulas():
    c = quadratic_pair(0.3 - 0.1j)
    assert c.period == 2
    for t in np.linspace(0, 1, 11):
        ref = 0.3 - 0.1j - (1 + 1j) / 2 + (1 + 4j) * t - 4j * t * t
        assert c.mu_at(t) == pytest.approx(ref, abs=1e-14)
    for t in np.linspace(1, 2, 11)[1:-1]:
        u = 2 - t
        ref = 0.3 - 0.1j - (1 + 1j) / 2 + (1 + 3j) * u - 3j * u * u
        assert c.mu_at(t) == pytest.approx(ref, abs=1e-14)
    assert c.continuity_errors() == pytest.approx([0, 0], abs=1e-15)
    assert quadratic_pair(0).winding_number(0) == 0


def test_rectangle_vertices_and_order():
    c = rectangular(1 + 1j, 2, 0.5)
    assert c.period == 4
    corners = [c.mu_at(t) for t in range(4)]
    assert corners == pytest.approx([0.5j + 0 + 1j, 2 + 1.5j, 2 + 0.5j, 0.5j])
    assert c.winding_number(1 + 1j) == -1  # clockwise
    assert c.winding_number(5) == 0


def test_rectangle_alpha_zero_sweeps_interval_twice():
    c = rectangular(0.5, 2, 0)
    t, mu = c.sample(800)
    assert np.max(np.abs(mu.imag)) == 0
    assert mu.real.min() == pytest.approx(-0.5) and mu.real.max() == pytest.approx(1.5)
    # left end visited at t = 0 (and 4), right end at t = 1 and 2
    assert c.mu_at(1) == c.mu_at(2) == 1.5


@given(deltas, rhos, alphas)
def test_builtins_are_closed_and_periodic(d, r, a):
    for c in (circular(d, r), elliptical(d, r, a, 3.0), quadratic_pair(d), rectangular(d, r, a, time_scale=1.7)):
        assert c.is_closed()
        assert max(c.continuity_errors()) <= 1e-9
        t = np.linspace(-3, 3, 17)
        np.testing.assert_allclose(c.mu_at(t + c.period), c.mu_at(t), atol=1e-12 * (1 + abs(d) + r))


@given(deltas, rhos, st.sampled_from([2 * math.pi, 4 * math.pi, -3.0, 1.0]))
def test_elliptical_alpha_one_is_circular(d, r, w):
    t = np.linspace(0, 3, 31)
    np.testing.assert_allclose(elliptical(d, r, 1, w).mu_at(t), circular(d, r, w).mu_at(t), atol=1e-14 * (1 + r))


def test_circular_example_curves():
    assert circular(0, 1).period == 1
    assert circular(0, 1).winding_number(0) == 1
    with pytest.raises(ValueError):
        circular(1, 1).winding_number(0)  # passes through the static EP
    assert circular(0.700145 + 0.254176j, 1.357497).winding_number(0) == 1


def test_rescaling_traverses_same_path():
    c = rectangular(0.2, 1.3, 0.7)
    s = c.rescaled(3.0)
    assert s.period == pytest.approx(12)
    t = np.linspace(0, 4, 41)
    np.testing.assert_allclose(s.mu_at(3 * t), c.mu_at(t), atol=1e-14)
    e = elliptical(0.2, 1.3, 0.7, 2.0)
    np.testing.assert_allclose(e.rescaled(2).mu_at(2 * t), e.mu_at(t), atol=1e-14)


def test_quadratic_scale_stretches_about_delta():
    c1, c2 = quadratic_pair(0.4), quadratic_pair(0.4, scale=2.5)
    t = np.linspace(0, 2, 21)
    np.testing.assert_allclose(c2.mu_at(t) - 0.4, 2.5 * (c1.mu_at(t) - 0.4), atol=1e-14)


def test_validation():
    with pytest.raises(ValueError):
        Segment(SegmentKind.LINEAR, 0, (0, 1))
    with pytest.raises(ValueError):
        Segment(SegmentKind.LINEAR, 1, (0,))
    with pytest.raises(ValueError):
        Segment(SegmentKind.CIRCULAR_ARC, 1, (0, 1))  # no omega
    with pytest.raises(ValueError):
        Segment(SegmentKind.CONSTANT, 1, (float("nan"),))
    with pytest.raises(ValueError):
        circular(0, -1)
    with pytest.raises(ValueError):
        rectangular(0, 1, -0.5)
    with pytest.raises(ValueError):
        ModulationCurve(())


def test_custom_curve_closure_checked_not_enforced():
    closed = custom([
        {"kind": "linear", "duration": 1, "coefficients": [0, 1]},
        {"kind": "linear", "duration": 1, "coefficients": [1, -1]},
    ])
    assert closed.is_closed() and closed.period == 2
    open_curve = custom([{"kind": "linear", "duration": 1, "coefficients": [[0, 0], [1, 1]]}])
    assert not open_curve.is_closed()
    assert open_curve.closure_error() == pytest.approx(math.sqrt(2))


def test_families_table():
    assert set(FAMILIES) == {"constant", "circular", "elliptical", "quadratic", "rectangular"}
    c = constant(2 + 1j, 3)
    assert c.period == 3 and c.mu_at(1.234) == 2 + 1j
