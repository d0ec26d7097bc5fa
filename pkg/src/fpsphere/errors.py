"""Exception types raised across the package."""


class FpSphereError(Exception):
    """Base class for all package errors."""


class InvalidFieldError(FpSphereError, ValueError):
    """The modulus is not a prime."""


class UnsupportedFieldError(FpSphereError, ValueError):
    """The operation is only defined for odd primes."""


class DimensionError(FpSphereError, ValueError):
    pass


class GuardExceededError(FpSphereError):
    """A configured resource guard (enumeration size, step budget) would be breached."""

    def __init__(self, guard_name, limit, requested):
        self.guard_name = guard_name
        self.limit = limit
        self.requested = requested
        super().__init__(f"{guard_name} exceeded: {requested} > {limit}")


class SamplingError(FpSphereError):
    """Rejection sampling hit its draw cap."""


class BoundInapplicableError(FpSphereError, ValueError):
    pass


class DeflationStateError(FpSphereError):
    pass


class ConvergenceError(FpSphereError):
    pass


class NumericIntegrityError(FpSphereError):
    pass


class ConsistencyError(FpSphereError, AssertionError):
    """An identity the construction guarantees did not hold (internal bug)."""


class EmptySphereError(FpSphereError, ValueError):
    """A sphere class needed as a basis state has no points."""
