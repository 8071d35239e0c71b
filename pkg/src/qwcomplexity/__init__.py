"""Geodesic circuit complexity of the 1D discrete-time quantum walk."""

from .algebra import (
    GeneratorBasis,
    MajoranaSet,
    PenaltyMetric,
    StructureConstants,
    build_generators,
    build_majoranas,
    default_basis,
    default_structure_constants,
    killing_form,
    penalty_metric,
    structure_constants,
)
from .circuit import (
    CircuitDecomposition,
    GateOp,
    depth,
    depth_series,
    kak_decompose,
    reconstruct,
)
from .complexity import (
    ComplexityReport,
    GeodesicPath,
    ResponseVector,
    convergence_study,
    cost,
    direct_complexity,
    euler_arnold_residual,
    extract_response,
    fit_slope,
    geodesic_path,
    slope_sweep,
    stepwise_complexity,
    stepwise_hamiltonian,
)
from .continuum import (
    continuum_complexity,
    continuum_response,
    dirac_hamiltonian,
    two_particle_hamiltonian,
)
from .exceptions import BranchAmbiguityWarning, DegenerateSeedError, NumericalAssertionError
from .numerics import (
    Spectrum,
    gram_schmidt_complete,
    hermitian_eigen_2x2,
    matrix_exp,
    path_ordered_product,
    principal_log_unitary,
)
from .purification import CoinDensity, PurifiedState, eop, partial_trace_2, purify, reduce
from .synthesis import TargetUnitary, UnitarySequence, fix_phase, sample_target, stepwise_factor
from .walk import Distribution, WalkState, evolve, initial_state, probability_distribution, step

__version__ = "0.1.0"
