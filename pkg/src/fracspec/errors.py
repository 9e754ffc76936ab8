"""Domain errors shared across the package.

Every error below signals a violated precondition or an honest failure to
certify a numerical result; none of them is ever swallowed internally.
"""


class FracspecError(Exception):
    """Base class for all package-specific errors."""


class PoleAtOne(FracspecError):
    """zeta(s) requested at its unique pole s = 1."""


class PoleAtNonpositiveInteger(FracspecError):
    """Gamma(s) requested at a pole (s = 0, -1, -2, ...)."""


class AccuracyNotReached(FracspecError):
    """The certified error bound cannot be pushed below the target within
    the configured term budget."""


class PoleOnSegment(FracspecError):
    """A vertical-line scan would pass through the pole at s = 1."""


class PoleLine(FracspecError):
    """An invertibility verdict was requested on the pole line c = 1."""


class PoleAtComplexDimension(FracspecError):
    """Closed-form geometric zeta evaluated on its pole lattice."""


class NotPrime(FracspecError):
    """A prime-indexed Euler factor was requested at a composite index."""


class UnboundedTail(FracspecError):
    """The multiplicative-shift sum requires a support bounded from below."""


class InsufficientAtoms(FracspecError):
    """Too few atoms for a statistically meaningful dimension fit."""
