"""Exception hierarchy shared across the package."""


class CrossgreedError(Exception):
    """Base class for all package errors."""


class DomainMismatchError(CrossgreedError, ValueError):
    """Two measures were combined without a common outcome set."""


class CapacityError(CrossgreedError):
    """An enumeration or atom count exceeded its configured cap."""


class DatasetError(CrossgreedError, ValueError):
    """A dataset or graph file violates the input contract."""


class DegenerateLabelError(DatasetError):
    """One of the two label classes has no rows."""


class VerificationError(CrossgreedError):
    """A structural identity that must hold exactly was violated."""
