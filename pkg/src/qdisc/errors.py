"""Exception hierarchy shared across the package."""


class QdiscError(Exception):
    """Base class for all errors raised by qdisc."""


class ValidationError(QdiscError, ValueError):
    """Invalid input: malformed matrix, circuit, histogram or configuration."""


class NoValidShots(QdiscError, ValueError):
    """Raised when an estimator has no (or non-positive) valid mass to divide by."""


class SingularCalibration(QdiscError, ValueError):
    """Raised when a readout confusion matrix cannot be inverted."""


class DegenerateDiscrimination(QdiscError, ValueError):
    """Raised when the two measurements are indistinguishable."""


class AngleSyntaxError(ValidationError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position
