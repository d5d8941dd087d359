"""Exception types raised across the package."""


class GradedError(ValueError):
    """Base class for malformed algebraic input."""


class TableMismatchError(GradedError):
    """Operands live over different generator tables."""


class MissingImageError(GradedError, KeyError):
    """A derivation has no image for a generator it is applied to."""


class NotHomogeneousError(GradedError):
    pass


class MalformedSectionError(GradedError):
    """A degree k-1 function is not a section of A + wedge^{k-1} A*."""


class UnsupportedRegimeError(GradedError):
    """The requested check is not available in this regime (e.g. sampled base)."""
