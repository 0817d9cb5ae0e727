"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class SwsurgError(Exception):
    """Base class for all errors raised by this package."""


class LatticeError(SwsurgError, ValueError):
    """Rejected input at the lattice level.

    Dimension mismatches, zero vectors where a nonzero one is required,
    non-symmetric Gram matrices and similar contract violations.
    """


class ValidationError(SwsurgError, ValueError):
    """One or more model invariants are violated; carries the full list."""

    def __init__(self, failures: list[str] | tuple[str, ...]):
        self.failures = tuple(failures)
        super().__init__("; ".join(self.failures) if self.failures else "validation failed")


class UnsupportedCaseError(SwsurgError):
    """The request falls outside what the engine determines.

    Raised for negative self-intersection normalization, non-extremal
    rank requests and other hypotheses the surgery calculus needs but
    the input does not satisfy.
    """


class InternalConsistencyError(SwsurgError, RuntimeError):
    """A quantity the theory forces came out wrong; indicates a bug."""


class ParseError(SwsurgError, ValueError):
    """Malformed input text, annotated with its position when known."""

    def __init__(self, message: str, source: str = "<data>",
                 line: int | None = None, column: int | None = None,
                 path: str | None = None):
        self.source = source
        self.line = line
        self.column = column
        self.path = path
        loc = source
        if line is not None:
            loc += f":{line}"
            if column is not None:
                loc += f":{column}"
        if path:
            loc += f" (at {path})"
        super().__init__(f"{loc}: {message}")
