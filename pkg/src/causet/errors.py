"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside a model's chart domain."""


class CapabilityError(RuntimeError):
    """The operation is not supported for this model or problem size."""


class DegenerateSampleError(RuntimeError):
    """Sampled points violate antisymmetry (coincident points)."""


class EstimationError(RuntimeError):
    """No analytic value available and no Monte Carlo budget given."""


class ConfigError(ValueError):
    """Invalid experiment configuration; message carries section/field."""
