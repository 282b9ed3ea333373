"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConsistencyError(RuntimeError):
    """A set of relations contradicts itself (cycle, ranking vs partial order)."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class FormatError(ValueError):
    """A serialized matrix, ranking or channel spec could not be parsed."""
