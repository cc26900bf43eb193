"""Exception hierarchy shared across the package."""


class StepGPError(Exception):
    """Base class for all stepgp errors."""


class ParameterError(StepGPError, ValueError):
    """A hyperparameter value violates its bounds or positivity constraint."""


class DimensionError(StepGPError, ValueError):
    """Inputs have incompatible shapes or dimensions."""


class DataError(StepGPError, ValueError):
    """A training set or test function input is invalid (duplicates, out of domain)."""


class NumericsError(StepGPError, RuntimeError):
    """A linear-algebra operation failed beyond what jitter escalation can fix."""


class OptimizationError(StepGPError, RuntimeError):
    """Every restart of a likelihood maximization failed."""


class ConfigError(StepGPError, ValueError):
    """A configuration file or serialized object cannot be parsed."""
