"""Exception types shared across the package."""


class PbranchError(Exception):
    """Base class for all package errors."""


class UsageError(PbranchError, ValueError):
    """Bad input: malformed literal, mismatched sizes, violated precondition."""


class ResourceError(PbranchError, RuntimeError):
    """A configured size cap would be exceeded."""

    def __init__(self, message: str, *, cap: str | None = None, estimate: int | None = None):
        super().__init__(message)
        self.cap = cap
        self.estimate = estimate
