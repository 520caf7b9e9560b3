"""Exception types shared across the package."""


class MQMIError(ValueError):
    """Base class for all errors raised by mqmi."""


class DimensionError(MQMIError):
    """Matrix shape and subsystem dimensions disagree."""


class PartitionError(MQMIError):
    """Blocks overlap, fall outside the party range, or are otherwise malformed."""


class InvalidStateError(MQMIError):
    """A matrix fails the density-matrix checks (hermiticity, positivity, trace)."""


class SpecError(MQMIError):
    """A state or channel specification cannot be parsed or is out of range."""


class ChannelError(MQMIError):
    """A Kraus channel is malformed or does not preserve trace."""
