"""Exception types shared by all modules."""


class GencolError(Exception):
    """Base class for library errors."""


class ParseError(GencolError, ValueError):
    """Malformed graph / decomposition / order document."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GencolError, ValueError):
    """An input structure violates its invariants."""


class SizeLimitError(GencolError, ValueError):
    """An exponential search was refused because the input exceeds its cap."""


class ContractError(GencolError, AssertionError):
    """A construction produced output violating its own guarantee (a bug)."""
