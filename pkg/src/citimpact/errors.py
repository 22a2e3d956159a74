"""Exception hierarchy shared by all citimpact modules."""


class CitimpactError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(CitimpactError):
    """Input file does not have the required tabular schema."""


class RowValidationError(CitimpactError):
    """A data row failed validation; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DuplicateIdError(CitimpactError):
    """The same (paper_id, unit_id) pair appeared more than once."""


class ConfigError(CitimpactError):
    """Invalid configuration: scope files, scheme files, generator specs,
    unknown output formats."""


class DomainError(CitimpactError):
    """An argument is outside the domain of the requested operation
    (empty reference set, top-share outside (0, 100), too few units)."""


class UndefinedIndicatorError(CitimpactError):
    """The indicator is mathematically undefined for this input (for example
    c/p of an empty unit). Never silently reported as 0 or NaN."""
