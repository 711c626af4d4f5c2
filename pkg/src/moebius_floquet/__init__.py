"""Moebius classification of two-level non-Hermitian dynamics, static and
periodically modulated, with Floquet analysis and stability diagrams."""
from .core import (
    DEFAULT_TOL,
    Hamiltonian2,
    MoebiusClass,
    Spectrum2,
    classify_hamiltonian,
    eigenvalues,
    eigenvectors,
    hamiltonian_from_matrix,
    is_exceptional,
    jordan_transform,
    nilpotent_part,
    pseudo_hermitian_parameter,
)
from .errors import (
    DiagonalInput,
    IntegratorFailure,
    MoebiusFloquetError,
    NoDominantState,
    NotExceptional,
    SingularMatrix,
)
from .floquet import (
    IntegratorOptions,
    Monodromy,
    classify_monodromy,
    evolution_operator,
    floquet_spectrum,
    fundamental_matrix,
    is_floquet_ep,
    monodromy,
    monodromy_fixed_step,
    stroboscopic_eigenstates,
    trajectory,
)
from .kernels import BACKEND
from .modulation import ModulationCurve, Segment, SegmentKind, circular, elliptical, quadratic_pair, rectangular
from .sphere import chordal_distance
from .static import (
    Propagator,
    State2,
    classify_transform,
    evolve,
    limit_polarisation,
    poincare_portrait,
    polarisation,
    polarisation_flow,
    propagator,
)
from .sweep import Axis, ClassGrid, SweepSpec, extract_boundaries, run_sweep

__version__ = "0.1.0"
