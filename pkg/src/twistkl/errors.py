"""Exception hierarchy.

Two families: ``VerificationFailure`` means a checked mathematical property
did not hold (CLI exit code 1); ``InternalConsistencyError`` means an
identity that must hold by construction was violated (CLI exit code 3).
"""


class TwistKLError(Exception):
    def __init__(self, message="", **payload):
        super().__init__(message)
        self.payload = payload


class UsageError(TwistKLError, ValueError):
    """Bad input: malformed group spec, star, or arguments."""


class InvalidMatrix(UsageError):
    pass


class InvalidStar(UsageError):
    pass


class UnsupportedGroup(UsageError):
    pass


class NotTwistedInvolution(UsageError):
    pass


class PreconditionViolated(UsageError):
    pass


class InternalConsistencyError(TwistKLError, AssertionError):
    """Raised when an algebraic identity that holds by theory fails."""


class NotDivisible(InternalConsistencyError):
    pass


class AntisymmetryViolated(InternalConsistencyError):
    pass


class EvennessViolated(InternalConsistencyError):
    pass


class FiltrationViolated(InternalConsistencyError):
    pass


class VerificationFailure(TwistKLError):
    """A verified property failed; ``payload`` carries the failing tuple."""


class PositivityViolated(VerificationFailure):
    pass


class RelationViolated(VerificationFailure):
    pass


class MismatchDetected(VerificationFailure):
    pass


class SplitViolated(VerificationFailure):
    pass
