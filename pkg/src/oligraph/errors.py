"""Exception hierarchy. CLI maps DataError to exit 3, anything else to 4."""


class OligraphError(Exception):
    """Base class for all package errors."""


class DataError(OligraphError):
    """Invalid or inconsistent user-supplied data or configuration."""


class IngestError(DataError):
    """CSV ingestion failure (missing column, duplicate node id, ...)."""


class GraphError(DataError):
    """Graph construction or operation violated a structural contract."""


class FitError(DataError):
    """Degenerate or insufficient input for distribution fitting."""
