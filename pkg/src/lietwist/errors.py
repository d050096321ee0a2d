"""Exception types raised across the package."""


class LieTwistError(Exception):
    """Base class for domain errors."""


class NonSquare(LieTwistError, ValueError):
    pass


class InvalidAlgebra(LieTwistError, ValueError):
    """Malformed structure constants or an AlgebraSpec document that fails validation."""


class OmegaNotClosed(LieTwistError, ValueError):
    pass


class OmegaZero(LieTwistError, ValueError):
    pass


class IrrationalSpectrum(LieTwistError):
    """An operator spectrum has a residual factor with no rational roots."""

    def __init__(self, message, residuals=()):
        super().__init__(message)
        self.residuals = residuals


class NotSolvable(LieTwistError):
    pass


class RationalSpectrumRequired(LieTwistError):
    """Lie's theorem needs an eigenvalue that is not rational."""

    def __init__(self, message, residual=()):
        super().__init__(message)
        self.residual = residual


class ProbeInExceptionalSet(LieTwistError, ValueError):
    pass
