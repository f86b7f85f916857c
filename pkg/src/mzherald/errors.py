"""Exception taxonomy shared across the package."""


class MZHeraldError(Exception):
    """Base class for all package errors."""


class ParameterError(MZHeraldError):
    """A physical parameter is outside its allowed domain."""


class ConfigError(MZHeraldError):
    """Invalid run configuration (CLI flags, config file, axes)."""


class MisuseError(MZHeraldError):
    """An operation was called in a way its contract forbids."""


class DegenerateMixtureError(MZHeraldError):
    """A pure-state mixture with zero total weight."""


class UnsupportedConfigError(MZHeraldError):
    """A physically valid configuration the requested code path does not cover."""


class QuadratureError(MZHeraldError):
    """Numerical integration failed to converge.

    Carries the last two refinement estimates so the caller can judge
    how far from convergence the quadrature stalled.
    """

    def __init__(self, message, last_estimate=None, previous_estimate=None):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.previous_estimate = previous_estimate


class NumericalError(MZHeraldError):
    """An eigensolver or other numerical kernel produced unusable output."""


class ConsistencyError(MZHeraldError):
    """An internal bookkeeping invariant (e.g. probability sum) was violated."""
