"""Exception hierarchy shared across the package."""


class CaliperError(Exception):
    """Base class for all errors raised by caliper."""


class IngestionError(CaliperError):
    """Raised when a CSV source fails structural or value validation."""


class ValidationError(CaliperError):
    """Raised when an argument violates an operation's contract."""


class EmptySelectionError(CaliperError):
    """Raised when an operation requires a non-empty row selection."""


class NotFoundError(CaliperError):
    """Raised when a named resource (session, model, subgroup) is unknown."""
