"""Exception hierarchy shared by every module of the toolkit."""


class SiameseError(Exception):
    """Base class for all toolkit errors."""


class InvalidGonCountError(SiameseError, ValueError):
    pass


class DomainError(SiameseError, ValueError):
    """A point or parameter lies outside the admissible domain."""


class ClosureError(SiameseError):
    """Heights do not close up into a Siamese dipyramid."""


class EvaluationError(SiameseError):
    """A scanned function returned a non-finite value."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


class NoTransitionError(SiameseError):
    pass


class NearSingularDomainError(DomainError):
    pass


class TraceError(SiameseError):
    """Continuation failed; ``last_point`` holds the last accepted point."""

    def __init__(self, message, last_point=None):
        super().__init__(message)
        self.last_point = last_point


class AtlasIncompleteError(SiameseError):
    def __init__(self, label, message=""):
        super().__init__(f"could not locate characteristic point {label}" + (f": {message}" if message else ""))
        self.label = label


class NotAdmissibleError(SiameseError):
    pass


class WrongRegimeError(SiameseError):
    pass


class UndefinedMeasureError(SiameseError):
    pass
