"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition.

    The CLI maps this to exit code 2.
    """


class DistanceMatrixError(ValidationError):
    """A distance matrix failed validation at a specific entry."""

    def __init__(self, message, pair=None):
        if pair is not None:
            message = f"{message} at (i, j) = {pair}"
        super().__init__(message)
        self.pair = pair
