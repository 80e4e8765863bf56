"""Exception hierarchy shared by all eigenbound modules.

Two failure families are kept strictly apart:

* ``InputError`` -- the caller handed us something malformed (bad file,
  dimension mismatch, violated precondition).  CLI exit code 2.
* ``VerificationViolation`` -- a proved inequality failed on a concrete
  instance.  That never indicates bad input; it indicates a bug in this
  package, so it is raised loudly instead of logged.  CLI exit code 1.
"""

from __future__ import annotations


class InputError(ValueError):
    """Malformed input or violated operation precondition."""


class ParseError(InputError):
    """Matrix file rejected; carries position information."""

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        super().__init__(f"line {line}, column {column}: {message}")


class VerificationViolation(RuntimeError):
    """A proved inequality failed; evidence of an implementation bug.

    ``details`` carries whatever the raiser knew (matrices, seed, trial
    index, bundle path) so callers can serialize a reproduction bundle.
    """

    def __init__(self, message: str, details: dict | None = None):
        self.details = details or {}
        super().__init__(message)
