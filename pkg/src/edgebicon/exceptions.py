"""Exception hierarchy shared across the package."""


class BiconError(Exception):
    """Base class for all package errors."""


class GraphError(BiconError, ValueError):
    """Malformed or unsupported graph input."""


class DisconnectedGraphError(GraphError):
    """Raised where a connected network is required."""

    def __init__(self, message="graph must be connected"):
        super().__init__(message)


class CycleCapExceeded(BiconError):
    """The exact cycle-witness-radius oracle refused an oversized input."""


class CongestViolation(BiconError):
    """A node broke the per-edge or message-size limits of the CONGEST model."""

    def __init__(self, node, round, reason):
        self.node = node
        self.round = round
        super().__init__(f"node {node} in round {round}: {reason}")


class NonTerminationError(BiconError):
    """The simulation did not quiesce within its round budget."""


class ProtocolError(BiconError):
    """A node reached a state the protocol should never produce."""


class NotTerminatedError(BiconError):
    """Result extraction was attempted on an unfinished run."""
