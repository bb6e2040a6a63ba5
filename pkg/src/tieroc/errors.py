"""Exception types shared across the package."""


class TierocError(Exception):
    """Base class for data and analysis errors raised by this package."""


class IngestError(TierocError):
    """Input data could not be validated at load time."""


class DegenerateClassError(TierocError):
    """An analysis operation needs at least one positive and one negative."""


class NotBinaryError(TierocError):
    """A binary-only closed form was requested on non-binary data."""


class InsufficientDataError(TierocError):
    """A variance estimate needs at least two subjects per class."""
