"""Exception hierarchy shared by every layer of the engine."""


class GWRecError(Exception):
    """Base class for all engine errors."""


class DimensionError(GWRecError, ValueError):
    pass


class NonInvertibleJetError(GWRecError, ZeroDivisionError):
    """A jet with zero constant term was inverted (degenerate base point)."""


class DegenerateFrameError(GWRecError):
    """No row subset gives a usable eigenvector frame, or a pivot vanished."""


class NonTameError(GWRecError):
    """The Euler matrix has a repeated eigenvalue or a root-sum denominator vanishes."""


class IntegrabilityError(GWRecError):
    """Mixed partial derivatives of the propagated jet disagree."""


class InsufficientOrderError(GWRecError):
    def __init__(self, required, available):
        super().__init__(
            f"insufficient jet order: need {required}, have {available}")
        self.required = required
        self.available = available


class ModelSyntaxError(GWRecError, ValueError):
    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class InvalidModelError(GWRecError, ValueError):
    def __init__(self, failures):
        super().__init__("invalid model: " + "; ".join(failures))
        self.failures = list(failures)


class ConditionCError(InvalidModelError):
    """Condition C fails, so degree equations have unbounded solution sets."""

    def __init__(self, message="Condition C violated: unbounded initial set"):
        super().__init__([message])


class GradingError(GWRecError, ValueError):
    """A multi-index does not satisfy the degree (grading) condition."""


class InitialDataError(GWRecError, ValueError):
    pass
