"""Exception types shared across the package."""


class FbrError(Exception):
    """Base class for all package errors."""


class InputError(FbrError):
    """Malformed user input: bad spec string, invalid arguments.  CLI exit 1."""


class ResourceLimitError(FbrError):
    """A configured resource cap was exceeded.  CLI exit 2."""


class TheoremViolationError(FbrError):
    """A property the theory guarantees failed to hold.  CLI exit 3."""


class InvariantViolationError(FbrError):
    """An internal structural invariant failed; indicates a bug."""


class NotIntegralAtPError(FbrError):
    """Reduction mod P applied to a value whose denominator is divisible by p."""
