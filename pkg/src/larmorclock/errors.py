"""Exception hierarchy shared by the library and the CLI."""


class LarmorClockError(Exception):
    """Base class for all package errors."""


class ProfileError(LarmorClockError, ValueError):
    """Invalid potential profile or clock window."""


class DegenerateInterfaceError(LarmorClockError, ArithmeticError):
    """Interface matching has a vanishing denominator (k_in + k_out + 2i*gamma = 0)."""


class RegimeError(LarmorClockError, ValueError):
    """Quantity requested outside the regime where it is defined."""


class SingularPointError(LarmorClockError, ArithmeticError):
    """Parameter point sits on a (possibly removable) singularity, e.g. V0 == E."""


class ConvergenceError(LarmorClockError, ArithmeticError):
    """A finite-difference extrapolation failed to meet its tolerance."""

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = list(estimates or [])


class SpinError(LarmorClockError, ValueError):
    """Spin expectation requested for a zero-norm spinor."""


class ConfigError(LarmorClockError, ValueError):
    """Bad CLI configuration (unknown key, unparsable value, ...)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ScatteringError(LarmorClockError, ArithmeticError):
    """Transfer-matrix composition failed (overflow that rescaling could not absorb)."""


class InvariantViolation(LarmorClockError, AssertionError):
    """An emitted quantity broke a guaranteed property (e.g. a non-positive corrected time)."""
