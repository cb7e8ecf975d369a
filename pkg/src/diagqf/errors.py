"""Shared exception types."""


class InvariantViolation(RuntimeError):
    """A computation violated an internal exactness or integrity invariant.

    Raised for states that indicate corrupted data or a broken assumption
    (odd raw lattice counts, count overflow, a damaged cache file), never
    for bad user input.  The CLI maps this to exit code 3.
    """


class GenusReconstructionError(ValueError):
    """Character-orthogonality reconstruction was requested for a class
    group whose dual is not spanned by genus characters."""
