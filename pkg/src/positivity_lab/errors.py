"""Exception hierarchy; the CLI maps each class to an exit code."""


class PositivityError(Exception):
    exit_code = 3


class PreconditionError(PositivityError, ValueError):
    """A documented precondition of an operation was violated by the caller."""

    exit_code = 1


class ModelError(PositivityError, ValueError):
    """Input fan, surface model, or JSON document is malformed or invalid."""

    exit_code = 2


class SoundnessError(PositivityError, RuntimeError):
    """An internal consistency guard fired (e.g. divergent cohomology)."""

    exit_code = 3
