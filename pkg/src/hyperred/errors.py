"""Exception types shared across the package."""


class HyperredError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExhausted(HyperredError):
    """A certified computation failed at the configured precision ceiling."""


class InsufficientPrecision(HyperredError):
    """A p-adic lifting failed verification at the requested precision."""


class NoSplit(HyperredError):
    """A slope-sign Hensel split was requested where none exists."""


class RepeatedRoot(HyperredError):
    """The polynomial has vanishing discriminant."""


class NotCoprime(HyperredError):
    """Two polynomials required to be coprime share a factor."""


class NotUnimodular(HyperredError):
    """A lattice Gram matrix is not integral with determinant +-1."""


class NotSplit(HyperredError):
    """A quadratic space fails the split signature/discriminant conditions."""


class BadFlag(HyperredError):
    """A flag violates the isotropy/perpendicularity conditions."""


class InvalidTriple(HyperredError):
    """A purported Mumford triple fails validation."""


class NotStable(HyperredError):
    """A lattice is not stable under the required operator."""


class FilterNotSatisfied(HyperredError):
    """An input does not satisfy a certified family-membership filter."""


class NotApplicable(HyperredError):
    """The hypotheses of an inequality check do not hold for the input."""
