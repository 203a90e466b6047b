"""Exact asymptotic cohomology of divisors on toric varieties and surfaces."""

from .errors import ModelError, PositivityError, PreconditionError, SoundnessError

__all__ = ["ModelError", "PositivityError", "PreconditionError", "SoundnessError"]
__version__ = "0.1.0"
