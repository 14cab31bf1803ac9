"""Exception hierarchy shared by every module in the package."""


class HelmertStudentError(Exception):
    """Base class for errors raised by this package."""


class UsageError(HelmertStudentError, ValueError):
    """Bad arguments: index out of range, length mismatch, empty input."""


class OrderTooSmallError(UsageError):
    """Matrix order below the minimum of 2."""


class CapacityError(HelmertStudentError):
    """Request exceeds a fixed capacity (64-bit integer range, memory budget)."""


class DomainError(HelmertStudentError, ValueError):
    """Argument outside the mathematical domain of a function."""


class DegeneracyError(HelmertStudentError, ArithmeticError):
    """A computation collapsed to a degenerate value (zero norm, zero variance)."""


class InsufficientSampleError(UsageError):
    """Sample too small for the requested test."""


class ConfigError(UsageError):
    """Verification configuration violates its invariants."""
