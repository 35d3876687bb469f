"""Exception hierarchy shared by all stages of the quadrature pipeline."""


class CCFError(Exception):
    """Base class; ``stage`` names the pipeline stage that raised."""

    stage = "core"

    def __init__(self, message: str, stage: str | None = None):
        super().__init__(message)
        if stage is not None:
            self.stage = stage


class DomainError(CCFError, ValueError):
    """Argument outside the domain of a function."""


class PoleError(DomainError):
    pass


class SpecialFunctionOverflow(CCFError, OverflowError):
    pass


class AccuracyError(CCFError):
    """Requested accuracy could not be certified."""

    def __init__(self, message: str, stage: str | None = None, estimate: float | None = None):
        super().__init__(message, stage)
        self.estimate = estimate


class ThresholdExceeded(CCFError):
    """Forward recursion requested beyond its stable range."""


class DegeneratePivot(CCFError):
    pass


class ConvergenceError(CCFError):
    pass


class SingularSystem(CCFError):
    pass


class MissingDependency(CCFError):
    pass


class OracleCapExceeded(CCFError):
    pass


class ParseError(CCFError, ValueError):
    """Expression syntax error; ``pos`` is the 0-based character offset."""

    stage = "parse"

    def __init__(self, message: str, pos: int = 0):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
