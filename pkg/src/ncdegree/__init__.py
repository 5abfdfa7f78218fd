"""Degree of nonclassicality: bounds over finite coherent superpositions and witnesses."""
__version__ = "0.1.0"

from ._kernels import BACKEND, available_backends
from .algebra import (
    AmplitudeConfiguration,
    LadderMonomial,
    NormalOrderedPolynomial,
    Projector,
    coherent_overlap,
    commutator_g_matrix,
    g_matrix,
    g_vector,
    gram_matrix,
)
from .bounds import (
    BoundResult,
    OptimizerConfig,
    finite_superposition_bound_approx,
    mode_transform,
    optimize_bound,
    pure_state_bound,
)
from .errors import (
    ApproximationDomainError,
    CoincidentAmplitudesError,
    ConditioningError,
    DegenerateConfigurationError,
    InvalidInputError,
    NcDegreeError,
    NestingError,
    NonHermitianError,
    OptimizerError,
    OracleCutoffError,
    UnboundedDirectionError,
    UnnormalizedStateError,
    UnsupportedModesError,
)
from .spectral import (
    EigenSolution,
    closed_form_r2,
    extremal_generalized_eigen,
    stationarity_residual,
)
from .states import (
    CoherentSuperposition,
    CompassSpec,
    FockVector,
    SqueezedVacuum,
    even_coherent_state,
    fock_oracle_expectation,
    make_compass,
)
from .witness import (
    CertificationResult,
    Witness,
    build_witness,
    certify,
    pure_state_distance,
    squeezing_db,
    variance_from_db,
)

__all__ = [
    "BACKEND",
    "available_backends",
    "AmplitudeConfiguration",
    "LadderMonomial",
    "NormalOrderedPolynomial",
    "Projector",
    "coherent_overlap",
    "commutator_g_matrix",
    "g_matrix",
    "g_vector",
    "gram_matrix",
    "BoundResult",
    "OptimizerConfig",
    "finite_superposition_bound_approx",
    "mode_transform",
    "optimize_bound",
    "pure_state_bound",
    "ApproximationDomainError",
    "CoincidentAmplitudesError",
    "ConditioningError",
    "DegenerateConfigurationError",
    "InvalidInputError",
    "NcDegreeError",
    "NestingError",
    "NonHermitianError",
    "OptimizerError",
    "OracleCutoffError",
    "UnboundedDirectionError",
    "UnnormalizedStateError",
    "UnsupportedModesError",
    "EigenSolution",
    "closed_form_r2",
    "extremal_generalized_eigen",
    "stationarity_residual",
    "CoherentSuperposition",
    "CompassSpec",
    "FockVector",
    "SqueezedVacuum",
    "even_coherent_state",
    "fock_oracle_expectation",
    "make_compass",
    "CertificationResult",
    "Witness",
    "build_witness",
    "certify",
    "pure_state_distance",
    "squeezing_db",
    "variance_from_db",
]
