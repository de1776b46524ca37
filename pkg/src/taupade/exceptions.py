"""Exception types raised across the package."""


class TauPadeError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(TauPadeError, ValueError):
    """Unsupported basis kind, bad parameter or malformed input."""


class IllConditionedError(TauPadeError, ArithmeticError):
    """A linear system is singular or too ill-conditioned to trust.

    The estimated condition number is kept on ``condition``.
    """

    def __init__(self, message, condition):
        super().__init__(f"{message} (condition estimate {condition:.3e})")
        self.condition = condition


class InsufficientCoefficientsError(TauPadeError, ValueError):
    """More series coefficients are needed than were supplied."""

    def __init__(self, message, max_feasible=None):
        super().__init__(message)
        self.max_feasible = max_feasible


class DegenerateApproximantError(TauPadeError, ArithmeticError):
    """A closed-form approximant is undefined (zero pivot or determinant)."""


class PoleProximityError(TauPadeError, ArithmeticError):
    """A rational function was evaluated at (or numerically on) a pole."""

    def __init__(self, message, location):
        super().__init__(message)
        self.location = location


class ProblemSpecError(TauPadeError, ValueError):
    """A problem file failed to parse or validate.

    ``path`` names the offending field (e.g. ``conditions[0].terms``);
    ``line``/``column`` are set for syntax errors.
    """

    def __init__(self, message, path=None, line=None, column=None):
        where = []
        if path:
            where.append(f"at {path}")
        if line is not None:
            where.append(f"line {line} column {column}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)
        self.path = path
        self.line = line
        self.column = column
