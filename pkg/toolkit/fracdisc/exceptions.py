class FracDiscError(ValueError):
    """
    Base class for every error raised by the fracdisc app
    """


class DegenerateStepError(FracDiscError):
    """
    The implicit step of a difference equation has a zero denominator
    """


class AlgebraicLoopError(FracDiscError):
    """
    The per-step loop equation 1 + g_p*g_c = 0 has no unique solution
    """


class PoleError(FracDiscError):
    """
    A frequency response was evaluated on a pole
    """


class ExpectationError(FracDiscError):
    """
    An expected value embedded in a run configuration did not hold
    """


class ConfigError(FracDiscError):
    """
    Invalid run configuration

    Carries the offending field name and, when known, the line of the
    document it was found on.
    """

    def __init__(self, message, field=None, line=None):
        self.message = message
        self.field = field
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        text = self.message
        if self.field and self.field.rsplit('.', 1)[-1] not in text:
            text = f'{self.field}: {text}'
        if self.line is not None:
            text = f'{text} (line {self.line})'
        return text
