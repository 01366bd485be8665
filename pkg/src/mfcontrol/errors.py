"""Exception types raised across the package."""


class ConfigurationError(ValueError):
    """Invalid controller, estimator, plant or scenario configuration."""


class InsufficientDataError(RuntimeError):
    """An estimator was asked for a value before its window was full."""


class NonMonotonicSampleError(ValueError):
    """A sample was pushed out of chronological order."""


class IntegratorFault(RuntimeError):
    """The plant integrator produced a non-finite state."""


class WeatherLoadError(ValueError):
    """A weather CSV could not be parsed; message names the row and column."""
