class CsliError(Exception):
    """Base class for errors raised by this package."""


class StructuralError(CsliError, ValueError):
    """A malformed object: coverage gaps, overlapping intervals, illegal images."""


class PreconditionError(CsliError, ValueError):
    """An operation was called on an input that fails its precondition.

    ``witness`` carries the offending point or interval when there is one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UndecidableError(CsliError):
    """Deciding the query would require enumerating a non-enumerable cut set."""


class ResolverError(CsliError, KeyError):
    """A semigroup family resolver has no map for a requested element."""
