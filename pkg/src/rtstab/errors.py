"""Exception hierarchy.

Every error carries the CLI exit code it maps to, so the command layer can
translate failures without a lookup table of its own.
"""


class RTError(Exception):
    exit_code = 3


class ConfigInvalid(RTError):
    exit_code = 1

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DegenerateInput(RTError, ValueError):
    exit_code = 1


class StableConfiguration(RTError):
    """Raised when rho2 <= rho1: there is no unstable wavenumber band."""

    exit_code = 2


class OutOfBand(RTError, ValueError):
    exit_code = 1


class NoConvergence(RTError):
    exit_code = 3


class DivisionBreakdown(RTError, ArithmeticError):
    exit_code = 3


class SingularSystem(RTError):
    exit_code = 3


class ContourTooCoarse(RTError):
    exit_code = 4


class ZeroOnBoundary(RTError):
    exit_code = 4


class GridTooCoarse(RTError, ValueError):
    exit_code = 1


class BoxTooSmall(RTError, ValueError):
    exit_code = 1


class EpsilonTooLarge(RTError, ValueError):
    exit_code = 1


class ZeroFrequencyTouched(RTError, ValueError):
    exit_code = 1


class OverflowGuard(RTError):
    """Linear growth would overflow; ``blowup_time`` is when it first would."""

    exit_code = 3

    def __init__(self, message, blowup_time):
        super().__init__(message)
        self.blowup_time = blowup_time
