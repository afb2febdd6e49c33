"""Exception hierarchy shared across the package.

Exit-code / HTTP-status mapping lives in the CLI and service layers; the
core raises these and stays transport-agnostic.
"""


class IvDesignError(Exception):
    """Base class for all package errors."""


class InputValidationError(IvDesignError):
    """Malformed or inconsistent input (bad graph, bad file, bad id)."""


class ContradictionError(InputValidationError):
    """An edge was asked to be oriented both ways."""


class CycleError(InputValidationError):
    """A directed cycle where a DAG was required."""

    def __init__(self, cycle, message=None):
        self.cycle = list(cycle)
        if message is None:
            message = "directed cycle: " + " -> ".join(str(v) for v in self.cycle)
        super().__init__(message)


class ParseError(InputValidationError):
    """A file could not be parsed; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class CapExceededError(IvDesignError):
    """A configured resource cap (enumeration size, subset count) was hit."""
