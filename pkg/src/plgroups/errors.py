"""Exception hierarchy shared by the library and the CLI."""


class PLGroupsError(Exception):
    """Base class for every error raised by plgroups."""


class DomainError(PLGroupsError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidMapError(PLGroupsError, ValueError):
    """Node data does not describe an orientation-preserving PL map of [0, 1]."""


class NotAnOrbitalError(DomainError):
    pass


class PreconditionError(PLGroupsError, ValueError):
    """An operation's stated precondition does not hold for the given input."""


class ResourceError(PLGroupsError):
    """A configured search cap was exhausted.

    ``partial`` carries whatever was computed before giving up (a partial
    construction log, a truncated element list, ...).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateInputError(PLGroupsError):
    """The input collapsed to the identity part way through a construction."""


class InconclusiveError(PLGroupsError):
    """A bounded search found nothing; absence is not a proof."""


class ParseError(PLGroupsError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column


class VerificationError(PLGroupsError):
    """Replaying a certificate did not reproduce it."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step
