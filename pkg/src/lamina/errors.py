"""Exception hierarchy shared across the package.

Everything raised on a domain-level misuse derives from LaminaError, so
callers (and the command line driver) can catch one type.  Genuine bugs
still surface as the usual built-in exceptions.
"""


class LaminaError(Exception):
    """Base class for domain errors raised by this package."""


class PreconditionError(LaminaError):
    """An operation was called outside its stated domain."""


class ParseError(LaminaError):
    """Malformed textual input (angle literals, lamination files, ...)."""
