"""Exception hierarchy shared by the solvers, the oracle and the CLI."""


class PouringError(Exception):
    """Base class for every error raised by this package."""


class InvalidState(PouringError, ValueError):
    """Input is not a list of nonnegative integers within the supported range."""


class InvalidPour(PouringError):
    """A pour violates the move preconditions."""


class AllZero(PouringError):
    """gcd requested for a state whose entries are all zero."""


class NotPourable(PouringError):
    """A two-vessel state from which no vessel can ever be emptied."""


class DegenerateState(PouringError):
    """A round algorithm was handed a state with an empty vessel."""


class NotPow2(PouringError):
    """n / gcd is not a power of two."""


class PoolExhausted(PouringError):
    """The four-vessel pool cannot cover a requested pour."""


class InvariantViolation(PouringError, AssertionError):
    """An instrumented runtime check failed; always an implementation bug."""


class CapExceeded(PouringError):
    """A computation would exceed the configured size caps."""


class NotFoundWithinCap(PouringError):
    """A scan finished its range without finding the requested value."""


class TooSmall(PouringError):
    """Generator parameters are too small for the construction to apply."""
