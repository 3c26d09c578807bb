"""Exception hierarchy. Everything derives from ``RealMonoError``."""


class RealMonoError(Exception):
    pass


class DimensionError(RealMonoError, ValueError):
    """Shapes do not fit (non-square input, mismatched n)."""


class ArityError(RealMonoError, ValueError):
    """Tuples of different length k."""


class HermitianityError(RealMonoError, ValueError):
    """A matrix required to be Hermitian is not, within tolerance."""


class DomainError(RealMonoError, ValueError):
    """Input outside the domain of an operation (singular, not PD, negative spectrum...)."""


class ConfigurationError(RealMonoError, ValueError):
    pass


class SpecError(RealMonoError, ValueError):
    """Malformed or non dimension-uniform free function specification."""


class ContractError(RealMonoError, ValueError):
    """A supplied map violates the contract of the operation (nonlinear, non-Hermitian output...)."""


class StepSizeError(RealMonoError, ValueError):
    """A finite-difference stencil left the domain; retry with a smaller step."""


class ParameterError(RealMonoError, ValueError):
    pass


class SamplingError(RealMonoError, RuntimeError):
    """Resampling budget exhausted without producing an in-domain sample."""
