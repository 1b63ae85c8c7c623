from __future__ import annotations


class CapacityError(RuntimeError):
    """A degree slice or matrix is larger than the configured limit.

    ``shape`` is the (rows, cols) that would have been needed; ``rows`` is
    ``None`` when the column count alone is already over the limit.
    """

    def __init__(self, message: str, shape: tuple[int | None, int], limit: int):
        super().__init__(message)
        self.shape = shape
        self.limit = limit


class DimensionMismatch(ValueError):
    pass


class FormSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InhomogeneousForm(ValueError):
    pass


class CoefficientRangeError(ValueError):
    pass


class OutOfHypothesisWarning(UserWarning):
    """Arguments fall outside the range where a closed formula is asserted."""
