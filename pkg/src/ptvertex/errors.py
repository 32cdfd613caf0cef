"""Exception types shared across the package."""


class PTVertexError(Exception):
    """Base class for all package-specific errors."""


class ZeroWeight(PTVertexError):
    """A character monomial with nonzero coefficient has identically zero weight.

    Signals a non-isolated fixed-point datum or a bug upstream; Euler classes
    of valid localization data never contain weight-zero monomials.
    """


class NotPolynomial(PTVertexError):
    """A character demanded in Laurent-polynomial form retains a denominator."""


class PoleSurvived(PTVertexError):
    """A grouped coefficient is undefined at u3 = 0.

    The specialization s3 = (s1+s2)/a must be regular on every profile class
    sum; this firing falsifies the cancellation property (an implementation
    bug, not a property of the inputs).
    """


class HypothesisFailed(PTVertexError):
    """The vanishing hypothesis of the point-set division does not hold."""


class CalibrationFailed(PTVertexError):
    """No convention choice reproduces the closed-form pairing targets."""


class RankDeficient(PTVertexError):
    """The relative/descendent correspondence matrix is singular."""


class NoFit(PTVertexError):
    """No rational form within the denominator ansatz matches the series."""


class Underdetermined(PTVertexError):
    """Too few known series coefficients to certify a rational fit."""


class DivisionByZero(PTVertexError):
    """Symbolic evaluation hit a vanishing denominator factor."""
