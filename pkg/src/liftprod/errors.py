"""Shared exception types."""


class FeasibilityError(Exception):
    """An exhaustive computation was refused because it exceeds its cap."""


class InvariantError(Exception):
    """A construction invariant failed (e.g. the CSS condition)."""
