"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid scenario, grid, or solver configuration."""


class SingularityError(ValueError):
    """Kernel evaluation requested at (or too close to) a source point."""


class GridResolutionError(RuntimeError):
    """Quadrature grid too coarse for the requested operation."""


class DegenerateChannelError(RuntimeError):
    """Channel carries no energy where a nonzero channel is required."""


class NumericalFailure(RuntimeError):
    """Non-finite values encountered inside an iterative solve."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
