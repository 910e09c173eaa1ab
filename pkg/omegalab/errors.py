# Exception hierarchy shared by all omegalab modules
# Each class carries the process exit code the CLI returns for it


class OmegalabError(Exception):
    """Base class for every error raised on purpose by the toolkit"""

    exit_code = 1


class ArgumentError(OmegalabError):
    """Invalid argument: out-of-range parameter, empty input, bad table"""

    exit_code = 2

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NoRealCycleError(ArgumentError):
    """T_a has no real two-cycle (a <= 3/4)"""


class PreconditionError(ArgumentError):
    """A structural precondition of a check does not hold"""


class NonConvergenceError(OmegalabError):
    exit_code = 3


class DomainEscapeError(OmegalabError):
    """An orbit left the declared state space

    Attributes:
        index (int): first iterate index outside the domain
        state: the offending state
    """

    exit_code = 4

    def __init__(self, index, state):
        super().__init__(f"orbit left the domain at index {index} (state {state!r})")
        self.index = index
        self.state = state


class ConsistencyError(OmegalabError):
    """Internal consistency failure, points at a bug rather than bad input"""
