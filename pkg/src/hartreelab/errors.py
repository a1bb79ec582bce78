"""Shared exception types."""


class ParameterError(ValueError):
    """A physical or numerical parameter is outside its admissible range."""


class GridMismatchError(ValueError):
    """Fields in one operation live on different grids."""


class QuadratureError(RuntimeError):
    """A time quadrature failed to converge within its refinement budget."""


class ConfigError(ValueError):
    """A run configuration file is malformed or self-inconsistent."""
