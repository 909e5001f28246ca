"""Exception types shared across the package."""


class SwarmcastError(Exception):
    """Base class for all package errors."""


class InvalidInputError(SwarmcastError, ValueError):
    """Malformed or out-of-contract arguments (non-finite coordinates, missing edge, ...)."""


class DegenerateGraphError(SwarmcastError, ValueError):
    """Graph cannot support the requested operation (isolated vertex under scaled weights)."""


class DisconnectedGraphError(SwarmcastError, ValueError):
    """Operation requires a connected graph but got more than one component."""


class NotApplicableError(SwarmcastError, ValueError):
    """A structural precondition of a certification rule does not hold."""


class SizeLimitError(SwarmcastError, ValueError):
    """Exhaustive search refused above its size cap."""


class ScenarioValidationError(SwarmcastError, ValueError):
    """Scenario document failed validation."""
