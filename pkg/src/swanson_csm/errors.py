"""Exception hierarchy shared by all modules."""


class SwansonError(Exception):
    """Base class for all library errors."""


class DegenerateParameters(SwansonError, ValueError):
    """Raised when omega equals alpha + beta, so the mass scale is undefined."""


class RegionError(SwansonError, ValueError):
    """Raised when parameters fall outside the region a routine supports."""


class DegreeTooLarge(SwansonError, ValueError):
    """Raised when a polynomial degree exceeds the supported maximum."""


class OutOfAccuracyEnvelope(SwansonError, ValueError):
    """Raised when an argument lies outside the validated accuracy envelope."""


class SeriesNonConvergent(SwansonError, ArithmeticError):
    """Raised when a power series fails to converge within its term budget."""


class ToleranceNotReached(SwansonError, ArithmeticError):
    """Raised when adaptive quadrature exhausts its refinement budget."""


class TimeNonPositive(SwansonError, ValueError):
    """Raised when a propagator is requested at t <= 0."""


class TruncationInsufficient(SwansonError, ArithmeticError):
    """Raised when a truncated series has a non-negligible tail."""


class OverflowGuard(SwansonError, OverflowError):
    """Raised when a closed form would overflow double precision."""


class IoError(SwansonError, OSError):
    """Raised when output files cannot be written or config cannot be read."""
