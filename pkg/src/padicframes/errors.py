class PAdicFrameError(Exception):
    """Base class for all errors raised by this package."""


class PAdicError(PAdicFrameError, ValueError):
    pass


class RefinementBudgetExceeded(PAdicFrameError):
    pass


class DepthTooCoarse(PAdicFrameError, ValueError):
    pass


class FamilyNotInSpace(PAdicFrameError):
    """Some family members are not elements of the test space."""

    def __init__(self, indices, labels=None):
        self.indices = list(indices)
        self.labels = list(labels) if labels is not None else None
        shown = self.labels if self.labels is not None else self.indices
        super().__init__(f"family members not in test space: {shown}")


class NotAFrame(PAdicFrameError):
    pass


class IndexMismatch(PAdicFrameError, ValueError):
    pass


class ConvergenceFailure(PAdicFrameError):
    pass


class NotHermitian(PAdicFrameError, ValueError):
    pass
