"""Exception taxonomy shared across the package."""


class EatonflowError(Exception):
    """Base class for all package errors."""


class InputError(EatonflowError):
    """Arguments violate a documented precondition."""


class SingularPointError(EatonflowError):
    """An orbit or point hits a singular locus (puncture, slit endpoint,
    obstacle tip); the computation cannot be continued past it."""


class InfeasibleError(EatonflowError):
    """A congruence or search has no solution in its admissible range."""


class ConstructionError(EatonflowError):
    """A constructed object failed one of its certified validity checks."""


class TargetUnreachableError(EatonflowError):
    """An exponent search exhausted its budget; carries a certificate."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class Undecided(EatonflowError):
    """A certified comparison could not be decided at the current working
    precision.  Callers either escalate precision or report 'undecided'."""


class PrecisionExhaustedError(EatonflowError):
    """The precision ladder was exhausted without certifying a decision."""
