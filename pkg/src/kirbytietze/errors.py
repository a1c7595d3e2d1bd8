"""Exception types shared across the package."""

from __future__ import annotations


class KirbyTietzeError(Exception):
    """Base class for all errors raised by this package."""


class MalformedInputError(KirbyTietzeError, ValueError):
    """Input data does not describe a valid object (bad index, bad table, ...)."""


class PreconditionError(KirbyTietzeError, ValueError):
    """An operation was called outside its documented domain."""


class RejectedMoveError(KirbyTietzeError):
    """A diagram move was refused because one of its preconditions failed.

    ``clause`` names the failed condition; ``index`` is the position of the
    offending move or path step when the error comes from a sequence.
    """

    def __init__(self, clause: str, index: int | None = None):
        self.clause = clause
        self.index = index
        where = f"step {index}: " if index is not None else ""
        super().__init__(where + clause)


class ParseError(KirbyTietzeError, ValueError):
    """Text input could not be parsed; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
