"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: usage errors -> 1, numerical
consistency errors -> 2, search failures -> 3.
"""


class UsageError(ValueError):
    """Invalid parameters, unknown families, malformed inputs."""

    exit_code = 1


class SizeLimitError(UsageError):
    """A construction exceeds its documented cap."""


class CapabilityError(UsageError):
    """Requested construction is outside the supported families."""


class GroupMismatchError(UsageError):
    """Two objects defined over different groups were combined."""


class NumericalConsistencyError(ArithmeticError):
    """A quantity that must be integral/exact failed its residual check."""

    exit_code = 2


class TrainingFailureError(NumericalConsistencyError):
    """Training loss became non-finite."""

    def __init__(self, message: str, epoch: int):
        super().__init__(message)
        self.epoch = epoch


class SearchFailureError(RuntimeError):
    """A search exhausted its budget without a feasible result."""

    exit_code = 3
