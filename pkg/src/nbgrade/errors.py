"""Exception hierarchy.

The CLI maps each branch to an exit status: ``ValidationError`` -> 1,
``UsageError`` -> 2, ``FormatError`` (and OS-level I/O errors) -> 3.
"""

from __future__ import annotations


class NBGradeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NBGradeError, ValueError):
    """Input data or arguments violate a domain contract."""


class DomainViolation(ValidationError):
    """A value is not a member of its variable's domain."""

    def __init__(self, variable: str, value: str, domain: tuple[str, ...], row: int | None = None):
        self.variable = variable
        self.value = value
        self.domain = tuple(domain)
        self.row = row
        where = f"row {row}: " if row is not None else ""
        allowed = ", ".join(self.domain)
        super().__init__(f"{where}{variable}: value {value!r} not in domain {{{allowed}}}")


class RangeError(ValidationError):
    """A percentage lies outside [0, 100]."""


class ParseError(ValidationError):
    """A cell that looks numeric could not be parsed as a percentage."""


class SchemaMismatchError(ValidationError):
    """CSV header does not map one-to-one onto the schema."""


class ArgumentError(ValidationError):
    """Invalid argument to a library operation (bad k, unknown variable, ...)."""


class TrainingError(ValidationError):
    """Training data is unusable, e.g. a record lacks its response."""


class DegenerateEvidenceError(ValidationError):
    """Every class scores exactly zero, so the posterior is undefined."""


class SpecError(ValidationError):
    """Invalid synthetic-cohort specification."""


class UsageError(NBGradeError):
    """An operation was called on an object that cannot support it."""


class FormatError(NBGradeError):
    """A serialized schema, model or spec file is malformed."""
