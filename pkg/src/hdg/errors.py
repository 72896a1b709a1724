"""Exception hierarchy shared by all modules; the CLI maps these to exit codes."""


class HdgError(Exception):
    """Base class for every error raised by this package."""


class InputError(HdgError, ValueError):
    """Malformed or out-of-range input (bad vertex, unparsable file, bad parameters)."""


class PreconditionError(HdgError):
    """The instance does not satisfy the hypotheses an operation requires."""


class UnsatisfiableGameError(PreconditionError):
    """No legal move sequence can ever cover the universe (e.g. total domination with an isolate)."""


class IllegalMoveError(HdgError):
    def __init__(self, vertex, message=None):
        self.vertex = vertex
        super().__init__(message or f"vertex {vertex} covers nothing new (uncovered delta is empty)")


class TerminalStateError(HdgError):
    """A move was requested from a state with no legal moves."""


class StrategyFault(HdgError):
    """A strategy returned an illegal move."""

    def __init__(self, strategy, vertex, detail=""):
        self.strategy = strategy
        self.vertex = vertex
        super().__init__(f"strategy {strategy!r} returned illegal vertex {vertex}{': ' + detail if detail else ''}")


class InternalInvariantError(HdgError, AssertionError):
    """An internal invariant was violated; indicates a bug, never bad input."""
