"""Exception hierarchy shared across the library.

Every failure mode the solvers can signal deliberately gets its own class so
callers (and the CLI exit-code mapping) can react without string matching.
"""


class VortexflowError(Exception):
    """Base class for all library errors."""


class NotPowerOfTwo(VortexflowError):
    """Grid resolution must be a power of two (padded-convolution requirement)."""


class ZeroMass(VortexflowError):
    """Field mass is too small to normalize against."""


class MassLoss(VortexflowError):
    """Too much mass falls outside the grid for the requested operation."""


class SupportMismatch(VortexflowError):
    """Relative entropy asked for omega > 0 where the reference vanishes."""


class DegenerateDenominator(VortexflowError):
    """Multiplier denominator D(omega) below the degeneracy guard.

    Signals proximity to the circular vortex-patch family, where the
    constrained equation is ill-posed.
    """

    def __init__(self, value, guard):
        super().__init__(f"denominator D={value:.3e} below guard {guard:.1e}")
        self.value = value
        self.guard = guard


class OutOfRange(VortexflowError):
    """Parameter outside the admissible range (e.g. b >= 8*pi)."""


class BracketFailure(VortexflowError):
    """Root bracketing failed in a normalization or search routine."""


class NonFinite(VortexflowError):
    """A trajectory or field stopped being finite."""


class NoSolutionInRange(VortexflowError):
    """Target (E, I) not reachable inside the multiplier search box."""


class CflViolation(VortexflowError):
    """Requested time step exceeds the stability bound."""


class BlowUpDetected(VortexflowError):
    """Sup norm of the vorticity exceeded the configured ceiling."""

    def __init__(self, time, sup_norm, ceiling):
        super().__init__(f"max|omega|={sup_norm:.4g} above ceiling {ceiling:.4g} at t={time:.6g}")
        self.time = time
        self.sup_norm = sup_norm
        self.ceiling = ceiling


class OracleDisagreement(VortexflowError):
    """Independent determinations of the same law differ beyond tolerance."""


class ConfigError(VortexflowError):
    """Scenario configuration rejected by validation."""


class FormatError(VortexflowError):
    """Malformed snapshot file."""
