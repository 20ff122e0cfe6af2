"""Exception types shared across the package."""


class UmstError(Exception):
    """Base class for errors raised by this package."""


class InputError(UmstError):
    """Caller passed inconsistent or out-of-range arguments."""


class DataError(UmstError):
    """Input data (files, streams) is malformed."""


class StructureError(UmstError):
    """A structural invariant (tree shape, connectivity) is violated."""
