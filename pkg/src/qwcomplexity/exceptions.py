"""Shared exception and warning types."""


class DegenerateSeedError(ValueError):
    """Raised when Gram-Schmidt seed vectors are (numerically) linearly dependent."""


class NumericalAssertionError(AssertionError):
    """A numerical self-check failed, signalling a construction bug upstream."""


class BranchAmbiguityWarning(UserWarning):
    """A unitary eigenphase sits on the log branch cut; the principal value was used."""
