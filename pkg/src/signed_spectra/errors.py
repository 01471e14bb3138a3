"""Exception types raised across the toolkit."""


class SignedGraphError(Exception):
    """Base class for every error raised by this package."""


class DuplicateEdge(SignedGraphError):
    pass


class LoopEdge(SignedGraphError):
    pass


class VertexOutOfRange(SignedGraphError):
    pass


class InvalidSign(SignedGraphError):
    pass


class InvalidSwitchSet(SignedGraphError):
    pass


class TooLarge(SignedGraphError):
    """Input exceeds the cap of a brute-force routine."""


class TooLargeForExact(TooLarge):
    pass


class NotACycle(SignedGraphError):
    pass


class CapExceeded(SignedGraphError):
    """Path enumeration exceeded its per-query budget."""


class ConvergenceFailure(SignedGraphError):
    pass


class NormalizationFailure(SignedGraphError):
    def __init__(self, message, graph=None):
        super().__init__(message)
        self.graph = graph


class InvalidMoveEdge(SignedGraphError):
    pass


class Disconnected(SignedGraphError):
    pass


class NegativeRadicand(SignedGraphError):
    pass


class TooSmall(SignedGraphError):
    pass


class InvalidEdge(SignedGraphError):
    pass


class BudgetExceeded(SignedGraphError):
    pass


class CorpusMissing(SignedGraphError):
    pass


class InvalidRange(SignedGraphError):
    pass


class NotUnbalanced(SignedGraphError):
    pass


class PreconditionNotMet(SignedGraphError):
    pass


class ParseError(SignedGraphError):
    pass
