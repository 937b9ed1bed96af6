"""Exception hierarchy shared by every engine and the CLI."""


class CorrdistError(Exception):
    """Base class for all errors raised by corrdist."""


class ValidationError(CorrdistError, ValueError):
    """Input does not satisfy a structural invariant."""


class NotSurjectiveLeft(ValidationError):
    def __init__(self, index: int):
        super().__init__(f"left index {index} is not covered by the relation")
        self.index = index


class NotSurjectiveRight(ValidationError):
    def __init__(self, index: int):
        super().__init__(f"right index {index} is not covered by the relation")
        self.index = index


class IndexOutOfRange(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class InvalidCoupling(ValidationError):
    pass


class InvalidMetric(ValidationError):
    pass


class InvalidHomeomorphism(ValidationError):
    pass


class NotStrictlyIncreasing(ValidationError):
    pass


class TooLarge(CorrdistError):
    """An exhaustive path was requested on an instance past its size guard."""

    def __init__(self, size: int, limit: int, what: str = "instance"):
        super().__init__(f"{what} of size {size} exceeds the exhaustive limit {limit}")
        self.size = size
        self.limit = limit
