"""Exception types raised by the optimizer, problems and runner."""


class GemError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(GemError, ValueError):
    """Invalid settings: bad dimensions, unknown names, out-of-range parameters."""


class EvaluationError(GemError, ArithmeticError):
    """An objective or constraint produced an unusable value (NaN, division by zero)."""
