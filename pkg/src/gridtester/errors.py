"""Exception hierarchy shared by the library and the CLI."""


class GridTesterError(Exception):
    """Base class for all errors raised by gridtester."""


class UsageError(GridTesterError, ValueError):
    """Bad input: mismatched dimensions, malformed files, unmet preconditions."""


class InstanceTooLarge(UsageError):
    """An exact solver was asked to run beyond its configured size cap."""


class UndefinedArithmetic(UsageError, ArithmeticError):
    """(+inf) + (-inf) or an equivalent undefined combination."""


class InvariantViolation(GridTesterError, RuntimeError):
    """A property that must hold by construction did not.

    Raised (never silently ignored) when e.g. the repair fill-in finds an
    empty interval or the perturbation digraph has a cycle.
    """
