"""Exception hierarchy."""


class CavithermError(Exception):
    pass


class ValidationError(CavithermError, ValueError):
    """Bad user input. ``path`` names the offending config field, if any."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class NumericalError(CavithermError, RuntimeError):
    pass


class KernelConvergenceError(NumericalError):
    def __init__(self, message, lag_index=None):
        self.lag_index = lag_index
        super().__init__(message)


class ConvergenceError(NumericalError):
    pass


class ConsistencyError(NumericalError):
    """Two routes to the same quantity disagree; indicates a wiring bug."""
