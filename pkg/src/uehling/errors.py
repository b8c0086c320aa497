"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class IntegrandError(FloatingPointError):
    """The integrand produced a non-finite value."""


class ConvergenceError(ArithmeticError):
    """Step halving did not reach the requested tolerance.

    The last (unconverged) result is kept on ``partial`` so callers can
    still inspect it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
