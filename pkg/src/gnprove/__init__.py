"""Guess'n'Prove engine for automatic continued fractions over characteristic 2."""

__version__ = "0.3.0"


class GnProveError(Exception):
    """Base class of all errors raised by gnprove."""
    pass
