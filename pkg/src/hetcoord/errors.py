"""Exception types shared across the simulator."""


class HetcoordError(Exception):
    """Base class for all hetcoord errors."""


class ConfigError(HetcoordError):
    """A configuration key is unknown, malformed, or out of range."""

    def __init__(self, key, reason):
        super().__init__(f"config key {key!r}: {reason}")
        self.key = key
        self.reason = reason


class DomainError(HetcoordError):
    """An argument lies outside the domain an operation is defined on."""


class PlacementInfeasible(HetcoordError):
    """Rejection sampling exhausted its attempt budget without a valid layout."""


class InsufficientData(HetcoordError):
    """Too few samples for the requested summary statistic."""


class EmitError(HetcoordError):
    """Writing a results table to its destination failed."""
