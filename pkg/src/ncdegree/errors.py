"""Exception hierarchy shared by all modules."""


class NcDegreeError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(NcDegreeError, ValueError):
    """Malformed or non-finite input, mismatched dimensions, bad spec files."""


class CoincidentAmplitudesError(InvalidInputError):
    """Two coherent amplitudes of a configuration are closer than the coincidence tolerance."""


class NonHermitianError(InvalidInputError):
    """An operation that requires a Hermitian observable received a non-Hermitian one."""


class UnnormalizedStateError(InvalidInputError):
    """A state model whose self-overlap differs from one."""


class ConditioningError(NcDegreeError, ArithmeticError):
    """The Gram matrix is too ill-conditioned for a reliable eigensolve.

    Attributes
    ----------
    condition_estimate : float
        Estimated condition number of the Gram matrix (``inf`` if the
        Cholesky factorization failed outright).
    """

    def __init__(self, condition_estimate, message=None):
        self.condition_estimate = float(condition_estimate)
        if message is None:
            message = f"Gram matrix condition estimate {self.condition_estimate:.3e} exceeds guard"
        super().__init__(message)


class UnsupportedModesError(InvalidInputError):
    """A single-mode-only operation received a multimode input."""


class OracleCutoffError(NcDegreeError):
    """The Fock-basis truncation is too small for the requested amplitudes."""


class OptimizerError(NcDegreeError):
    """Base class for outer-optimizer failures."""


class UnboundedDirectionError(OptimizerError):
    """The objective keeps improving while the amplitudes run off to infinity."""


class DegenerateConfigurationError(OptimizerError):
    """Every start ended on a penalized (coincident or ill-conditioned) configuration."""


class NestingError(NcDegreeError):
    """A family of bounds violates the monotone nesting b'_1 >= b'_2 >= ... (or b_1 <= b_2 <= ...)."""


class ApproximationDomainError(NcDegreeError):
    """The well-separated approximation was requested outside its validity regime."""
