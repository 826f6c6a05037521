"""Exception hierarchy for banachgeo."""


class BanachGeoError(ValueError):
    """Base class for all banachgeo errors."""


class DimensionMismatch(BanachGeoError):
    pass


class DegenerateSpan(BanachGeoError):
    """Input vertices do not span the ambient space."""


class AsymmetricInput(BanachGeoError):
    """Vertex list is not symmetric and automatic closure is disabled."""


class NumericallyIllConditioned(BanachGeoError):
    """Two candidate facets are indistinguishable at the working tolerance."""


class UnknownPreset(BanachGeoError):
    pass


class OutOfRange(BanachGeoError):
    pass


class ZeroVector(BanachGeoError):
    pass


class BadEpsilon(BanachGeoError):
    """Approximation parameter outside [0, 1)."""


class DependentFunctionals(BanachGeoError):
    pass


class UnsupportedSpace(BanachGeoError):
    pass


class UnsupportedDimension(BanachGeoError):
    pass


class UnsupportedP(BanachGeoError):
    """Operation not defined for this exponent (e.g. p = 1 or infinity)."""


class ZeroOperator(BanachGeoError):
    pass


class TooFewFunctionals(BanachGeoError):
    pass


class HypothesisUnmet(BanachGeoError):
    """A theorem-level precondition failed, so the check cannot run."""


class UnknownExperiment(BanachGeoError):
    pass
