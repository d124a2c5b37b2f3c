"""Exception hierarchy for floatberg."""


class FloatbergError(Exception):
    """Base class for all package errors."""


class InvalidBody(FloatbergError, ValueError):
    pass


class DegenerateBody(InvalidBody):
    pass


class NotSymmetric(FloatbergError, ValueError):
    pass


class EmptySection(FloatbergError, ValueError):
    pass


class DeltaOutOfRange(FloatbergError, ValueError):
    pass


class EmptyFloatingBody(FloatbergError):
    pass


class PointOutsideBody(FloatbergError, ValueError):
    pass


class MBelowMinimum(FloatbergError, ValueError):
    pass


class IndeterminateAtTolerance(FloatbergError):
    def __init__(self, value, error, threshold):
        self.value, self.error, self.threshold = value, error, threshold
        super().__init__(
            f"kernel {value:.6e} +/- {error:.2e} straddles threshold {threshold:.6e}")


class QuadratureNotConverged(FloatbergError):
    def __init__(self, value, error, message="quadrature did not converge"):
        self.value, self.error = value, error
        super().__init__(f"{message}: value {value:.6e}, achieved error {error:.2e}")
