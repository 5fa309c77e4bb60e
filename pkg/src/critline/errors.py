"""Exception and warning types.

Every error carries a stable ``code`` string; the CLI prints it on stderr.
"""


class CritlineError(Exception):
    code = "CRITLINE_ERROR"

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class PoleProximity(CritlineError):
    code = "POLE_PROXIMITY"


class WrongRegion(CritlineError):
    code = "WRONG_REGION"


class PoleOfGamma(CritlineError):
    code = "POLE_OF_GAMMA"


class NoConvergence(CritlineError):
    code = "NO_CONVERGENCE"


class EtaDenominatorSmall(CritlineError):
    code = "ETA_DENOMINATOR_SMALL"


class NotAZero(CritlineError):
    code = "NOT_A_ZERO"


class VerificationFailed(CritlineError):
    code = "VERIFICATION_FAILED"

    def __init__(self, message, quantity=None):
        super().__init__(message)
        self.quantity = quantity


class DimensionTooLarge(CritlineError):
    code = "DIMENSION_TOO_LARGE"


class SingularGram(CritlineError):
    code = "SINGULAR_GRAM"


class AlphaOutOfRange(CritlineError):
    code = "ALPHA_OUT_OF_RANGE"


class DegenerateClosedForm(UserWarning):
    """A closed-form denominator vanished; the quadrature fallback was used."""

    code = "DEGENERATE_CLOSED_FORM"


class TailTooLarge(UserWarning):
    """The truncation bound of a series exceeds the requested tolerance."""

    code = "TAIL_TOO_LARGE"
