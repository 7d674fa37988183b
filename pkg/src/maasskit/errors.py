"""Exception hierarchy.

Every error maps to a CLI exit code through ``exit_code``: validation
problems exit 2, numerical failures exit 3.
"""


class MaassKitError(Exception):
    exit_code = 3


class ValidationError(MaassKitError):
    exit_code = 2


class NumericalError(MaassKitError):
    exit_code = 3


class PoleError(NumericalError):
    def __init__(self, location, message=None):
        self.location = location
        super().__init__(message or f"pole at s = {location}")


class DomainError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class ContinuationError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class InsufficientCoefficients(NumericalError):
    def __init__(self, required, available, message=None):
        self.required = required
        self.available = available
        super().__init__(message or f"need {required} coefficients, have {available}")


class QuadratureError(NumericalError):
    pass


class PoleOnContour(NumericalError):
    pass


class SingularSystem(NumericalError):
    pass


class PreconditionError(ValidationError):
    pass


class RelationError(ValidationError):
    pass


class DegenerateFixedPoints(ValidationError):
    pass


class FormatError(ValidationError):
    pass


class SanityBoundViolation(ValidationError):
    pass


class BadPrimeUnsupported(ValidationError):
    pass


class MissingEigenvalue(ValidationError):
    pass
