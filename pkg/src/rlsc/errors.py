"""Exception hierarchy shared by every compiler stage.

The CLI maps exception classes onto exit codes: input problems exit with 2,
resource caps with 3 and failed verification with 4.
"""


class RlscError(Exception):
    """Base class for all compiler errors."""

    exit_code = 1


class InputError(RlscError):
    exit_code = 2


class RegexSyntaxError(InputError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownSymbolError(RegexSyntaxError):
    pass


class LengthMismatchError(InputError):
    pass


class EmptyLanguageError(InputError):
    """Raised when there is no word to put in superposition."""


class EmptyComplementError(EmptyLanguageError):
    pass


class ResourceLimitError(RlscError):
    exit_code = 3


class StateCapError(ResourceLimitError):
    pass


class SizeLimitError(ResourceLimitError):
    pass


class NotCanonicalError(RlscError):
    pass


class NotIsometricError(RlscError):
    pass


class VerificationError(RlscError):
    exit_code = 4


class StageError(RlscError):
    """Wraps an error raised inside a named pipeline stage."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)


class NumericalDegeneracyWarning(UserWarning):
    """Retained and discarded singular values are too close to trust the rank cut."""
