"""Exception taxonomy shared across the package."""


class TlabError(Exception):
    """Base class for all errors raised by tlab."""


class BadSpec(TlabError):
    """Malformed group / G-set / CLI input."""


class NonAssociative(BadSpec):
    """Composition table fails associativity."""


class MissingInverse(BadSpec):
    """Composition table lacks an identity or an inverse."""


class OrderBoundExceeded(BadSpec):
    """Group order exceeds the configured desk-scale bound."""


class BoundExceeded(TlabError):
    """A configurable size bound was exceeded."""


class SectionBlowup(BoundExceeded):
    """Dependent-product construction would enumerate too many sections."""


class LevelMismatch(TlabError):
    """Element supplied at the wrong G-set or level."""


class NotSaturated(TlabError):
    """Seed submonoid failed a saturation spot check."""


class NotInvariant(TlabError):
    """Seed submonoid failed a G-invariance spot check."""


class NotInvariantIdeal(TlabError):
    """Ideal seed failed a G-invariance spot check."""


class IdealMeetsDenominators(TlabError):
    """Ideal and denominator subfunctor are not disjoint."""


class NotInvertibleImage(TlabError):
    """A denominator generator maps to a non-invertible element."""


class InvalidDenominator(TlabError):
    """Denominator could not be verified to lie in the subfunctor."""


class UndecidedEquality(TlabError):
    """Fraction comparison exhausted every complete strategy."""


class UndecidableCarrier(TlabError):
    """Carrier does not support the requested decision procedure."""
