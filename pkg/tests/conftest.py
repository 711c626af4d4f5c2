import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from moebius_floquet.core import Hamiltonian2

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=100,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def complex_mag(lo=1e-2, hi=1e2):
    """Complex numbers with log-uniform modulus in [lo, hi] and uniform phase."""
    return st.builds(
        lambda e, phi: cmath.rect(10 ** e, phi),
        st.floats(math.log10(lo), math.log10(hi)),
        st.floats(-math.pi, math.pi),
    )


def hamiltonians(lo=1e-2, hi=1e2, ep=False):
    mu = st.just(0j) if ep else complex_mag(lo, hi)
    return st.builds(Hamiltonian2, complex_mag(lo, hi), complex_mag(lo, hi), complex_mag(lo, hi), mu)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


#: criterion -> list of (label, passed, detail), filled by test_acceptance
ACCEPTANCE = {}


def record(criterion, passed, detail, label=None):
    ACCEPTANCE.setdefault(criterion, []).append((label or str(criterion), bool(passed), detail))
    print(f"criterion {label or criterion}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE, key=lambda c: int(c)):
        parts = ACCEPTANCE[crit]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"[{lbl}] {d}" if len(parts) > 1 else d for lbl, _, d in parts)
        terminalreporter.write_line(f"criterion {crit:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
