"""
Exception hierarchy for the workbench

Every error carries the process exit code the CLI reports for it.
"""

from typing import Optional


class RieszLabError(Exception):
    """Base class for all workbench errors"""

    exit_code = 4


class ConfigError(RieszLabError):
    """Malformed or unknown configuration"""

    exit_code = 1


class ParameterError(RieszLabError, ValueError):
    """Parameter outside the range an operation accepts"""

    exit_code = 1


class InadmissibleParametersError(ParameterError):
    """Parameter set for which no decay theorem applies"""

    def __init__(self, message: str, hypothesis: str = ""):
        super().__init__(message)
        self.hypothesis = hypothesis


class BlowupError(RieszLabError):
    """Non-finite or runaway values in a field"""

    exit_code = 2

    def __init__(self, message: str, tau: Optional[float] = None):
        super().__init__(message)
        self.tau = tau


class NumericError(RieszLabError):
    """Internal numerical failure"""

    exit_code = 4


class CharacteristicInversionError(NumericError):
    """Newton iteration for the Burgers characteristics did not converge"""


class CFLViolationError(NumericError):
    """Time step too large for the current velocity"""

    def __init__(self, message: str, tau: Optional[float] = None):
        super().__init__(message)
        self.tau = tau
        # norms recorded before the abort, attached by the solver
        self.series = None


class FitError(NumericError):
    """Decay-rate fit could not be performed"""


class DomainError(NumericError):
    """Negative power of a vanishing density"""


class DegenerateInputError(RieszLabError, ValueError):
    """Ratio with a vanishing denominator"""

    exit_code = 4


class VerificationFailure(RieszLabError):
    """A verdict row failed"""

    exit_code = 3
