"""Exception types shared across the package."""


class AceqecError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(AceqecError, ValueError):
    """A physical or model parameter is outside its valid domain."""


class DegenerateChannelError(AceqecError, ValueError):
    """An asymmetry ratio was requested for a channel with no X component."""


class CircuitFormatError(AceqecError, ValueError):
    """A circuit file or circuit construction violates the .ftc rules."""


class ScheduleError(AceqecError, ValueError):
    """A circuit does not satisfy the preconditions of a scheduling pass."""


class InfeasibleError(AceqecError, ValueError):
    """A requested limit or rebalancing target cannot be met by the circuit."""
