"""Exception types raised across tunnelkit.

Every model error derives from :class:`TunnelkitError`, so callers (and the
CLI) can separate model/data failures from programming errors.
"""


class TunnelkitError(Exception):
    """Base class for model and data errors."""


class EnergyAboveBarrier(TunnelkitError, ValueError):
    """Incident energy is at or above the barrier top."""


class ExcessiveDissipation(TunnelkitError, ValueError):
    """Energy lost inside the barrier would exceed the particle energy."""


class NonConvergence(TunnelkitError, ArithmeticError):
    """Adaptive quadrature ran out of its evaluation budget.

    ``estimate`` and ``abs_error`` hold the best result reached.
    """

    def __init__(self, message, estimate=float("nan"), abs_error=float("inf"), evaluations=0):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error = abs_error
        self.evaluations = evaluations


class DegenerateSplit(TunnelkitError, ValueError):
    """Transmission is 0 or 1, so one of the conditional dwell times is infinite."""


class OutOfRegime(TunnelkitError, ValueError):
    """Voltage lies outside the intermediate-voltage Simmons window."""


class ParseError(TunnelkitError, ValueError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class EmptyDataset(TunnelkitError, ValueError):
    """No usable I-V rows were found."""


class NonPhysicalFit(TunnelkitError, ValueError):
    """Best-fit scale factor is not positive (data anti-correlated with the model)."""
