"""Exception types shared across the package."""


class FloqlatError(Exception):
    """Base class for all package-specific failures."""


class GapClosedError(FloqlatError):
    """Band gap below tolerance somewhere on the integration grid."""


class NotConvergedError(FloqlatError):
    """Plaquette sum did not round cleanly to an integer."""


class DegenerateStartError(FloqlatError):
    """Initial Hamiltonian is (numerically) degenerate."""


class StepTooLargeError(FloqlatError):
    """Integrator step violates the phase-step bound."""


class NumericalBlowupError(FloqlatError):
    """NaN/inf detected during time evolution."""

    def __init__(self, message, t_bad=None):
        super().__init__(message)
        self.t_bad = t_bad


class ZeroNormError(FloqlatError):
    """State norm collapsed below tolerance."""


class ConfigMismatchError(FloqlatError):
    """Trajectory was produced with a different configuration."""


class InsufficientDataError(FloqlatError):
    """Too few samples for the requested fit."""


class NyquistViolationError(FloqlatError):
    """Requested sample rate undersamples a synthesized tone."""


class ConfigError(FloqlatError):
    """Config file could not be parsed or validated."""

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line
