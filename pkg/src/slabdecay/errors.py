"""Exception types shared across the package."""


class SlabDecayError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(SlabDecayError):
    """Invalid parameter value (nonpositive dt, bad config field, ...)."""


class InterpolationUnavailableError(SlabDecayError):
    """A tabulated symbol was queried off its table."""


class DegenerateExponentError(SlabDecayError):
    """rho = 4 pi^2 |xi|^2 makes the vertical exponents coincide."""


class DegenerateParameterError(SlabDecayError):
    """g = 3 / ell^3 puts the low-frequency seed on the exponent degeneracy."""


class HypothesisNotMetError(SlabDecayError):
    """The high-frequency largeness condition fails at this frequency."""


class NoRootInBracketError(SlabDecayError):
    """The determinant does not change sign on the search bracket."""


class ContinuationFailedError(SlabDecayError):
    """Newton continuation in kappa failed to converge."""


class NotARootError(SlabDecayError):
    """Null-vector extraction requested at a point that is not a root."""


class SingularSystemError(SlabDecayError):
    """The implicit time-step linear system could not be solved."""


class FitDomainError(SlabDecayError):
    """Curve fitting requested on an invalid window (nonpositive values, too short)."""
