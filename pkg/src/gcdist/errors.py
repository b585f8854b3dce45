"""Exception types raised across the package."""


class GcdistError(Exception):
    """Base class for every error raised by gcdist."""


class InvalidBoxError(GcdistError, ValueError):
    """A box has a non-finite field or a dimension below the minimum."""


class InvalidGaussianError(GcdistError, ValueError):
    """A Gaussian box has a non-positive or non-finite variance."""


class InvalidTransformError(GcdistError, ValueError):
    """An affine map has a non-positive or non-finite scale factor."""


class UnknownMetricError(GcdistError, ValueError):
    """A metric name or kind is not one of the supported metrics."""


class ConfigError(GcdistError, ValueError):
    """A configuration value violates its documented constraints."""


class CocoFormatError(GcdistError):
    """An annotation file is malformed or internally inconsistent."""


class DivergenceError(GcdistError):
    """Gradient descent produced a non-finite loss or left the valid box domain.

    Carries the partial trace accumulated before the failing step in
    ``partial_trace`` (a list of trace records).
    """

    def __init__(self, message, partial_trace):
        super().__init__(message)
        self.partial_trace = partial_trace
