"""Exception and warning types raised across the package."""


class FraclineError(Exception):
    """Base class for all package errors."""


class DomainError(FraclineError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConvergenceError(FraclineError, ArithmeticError):
    """A series or extrapolation failed to reach the requested tolerance."""


class ConfigError(FraclineError, ValueError):
    """Inconsistent or unstable run configuration."""


class StabilityError(FraclineError, ArithmeticError):
    """An explicit time-stepping run blew up."""


class UsageError(FraclineError):
    """Command-line usage error; carries the offending flag."""

    def __init__(self, message, flag=None):
        super().__init__(message)
        self.flag = flag


class SmoothnessWarning(UserWarning):
    """Sampled data looks too rough for a second-order stencil."""


class ResolutionWarning(UserWarning):
    """Kernel or domain is under-resolved by the chosen grid."""
