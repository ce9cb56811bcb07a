"""Exception hierarchy.

Everything raised on purpose derives from :class:`DualityLabError`, so callers
(the command line front end in particular) can map failures onto exit codes.
"""


class DualityLabError(Exception):
    pass


class DomainError(DualityLabError, ValueError):
    """A parameter lies outside its physical domain."""


class DimensionError(DualityLabError, ValueError):
    pass


class NotHermitianError(DualityLabError, ValueError):
    pass


class ConvergenceError(DualityLabError, ArithmeticError):
    pass


class DegenerateConfigurationError(DualityLabError, ArithmeticError):
    """Raised when ``1 + S_x cos(beta)`` vanishes.

    In that configuration the particle never leaves through either monitored
    output, so visibility, priors and which-path information are undefined.
    """

    def __init__(self, detail=""):
        msg = "no particle reaches monitored outputs"
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class IndistinguishableStatesError(DualityLabError, ValueError):
    """The detector states overlap completely (C = 1)."""


class InvariantViolationError(DualityLabError, AssertionError):
    pass
