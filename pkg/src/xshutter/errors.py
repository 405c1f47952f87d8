"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Arrays that must agree in shape do not."""


class ParameterError(ValueError):
    """A scalar argument is outside its valid domain."""


class ConfigError(ValueError):
    """A configuration file or object is malformed or inconsistent."""


class SolverDivergenceError(RuntimeError):
    """The decomposition energy became non-finite.

    The energy trace up to the failure is kept on ``trace`` so that a
    caller can inspect or export it.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
