"""Exception types raised across the package."""


class FcmError(Exception):
    """Base class for all package errors."""


class ShapeError(FcmError, ValueError):
    """Array dimensions do not conform to the model or to each other."""


class DataError(FcmError, ValueError):
    """Malformed input data, labels, config or model files."""


class NumericalError(FcmError, ArithmeticError):
    """Non-finite values encountered in parameters, states, losses or gradients."""


class ConfigError(DataError):
    """Unknown, missing, duplicate or invalid training-config keys."""
