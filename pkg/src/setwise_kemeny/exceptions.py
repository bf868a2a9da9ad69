"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument to a library operation."""


class CycleError(InputError):
    """Inserting a pair order would make the constraint set cyclic."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__(f"constraint cycle: {' -> '.join(map(str, self.cycle))}")


class ParseError(ValueError):
    """Malformed election file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFormatError(ParseError):
    """File uses a format feature outside the supported grammar."""


class ValidationError(ParseError):
    """File parsed but its contents contradict its own metadata."""
