"""Exception hierarchy shared across the package."""


class DelcodeError(Exception):
    """Base class for every error raised by delcode."""


class ParameterError(DelcodeError, ValueError):
    """Invalid parameters or argument shapes."""


class DomainError(ParameterError):
    """A numeric argument lies outside a function's domain."""


class MalformedInputError(ParameterError):
    """A received string cannot have come from the code under the promised channel."""


class DesyncError(DelcodeError):
    """The boundary decoder computed a count outside ``[0, delta]``."""


class CapacityError(DelcodeError):
    """An enumeration or encoding exceeds its configured capacity."""


class SamplingError(CapacityError):
    """Rejection sampling gave up after too many consecutive rejections."""
