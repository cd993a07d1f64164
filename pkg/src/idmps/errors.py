"""Exception types shared across the package."""


class Error(Exception):
    """Base class for package errors."""


class DomainError(Error, ValueError):
    """Argument outside the mathematical domain (e.g. Im tau <= 0)."""


class PoleError(DomainError):
    """Evaluation requested at a pole (z on the period lattice)."""


class InputError(Error, ValueError):
    """Structurally invalid input (bad shapes, broken invariants)."""


class NumericalError(Error, RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""


class AccuracyError(NumericalError):
    """Series or iteration exceeded its budget before converging."""


class ConsistencyError(Error, RuntimeError):
    """A result violates an internal consistency requirement."""
