"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class InvariantViolation(AssertionError):
    """An internal consistency check failed."""
