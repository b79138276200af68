"""Exception and warning types shared across tradenet.

Every error maps to one CLI exit code, so callers can catch the base class
of a family instead of individual failures.
"""


class TradenetError(Exception):
    exit_code = 1


class ConfigError(TradenetError, ValueError):
    """Invalid parameter or configuration value."""

    exit_code = 2


class DataError(TradenetError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 3


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PartitionError(DataError):
    pass


class UndefinedStatisticError(TradenetError, ValueError):
    """A statistic is undefined for the given graph (e.g. density with n < 2)."""

    exit_code = 3


class ModelError(TradenetError, ValueError):
    exit_code = 2


class NumericalError(TradenetError, ArithmeticError):
    exit_code = 4


class ConvergenceError(NumericalError):
    pass


class TradenetWarning(UserWarning):
    pass


class SelfLoopWarning(TradenetWarning):
    def __init__(self, count):
        self.count = count
        super().__init__(f"dropped {count} self-loop record(s)")


class DuplicateEdgeWarning(TradenetWarning):
    def __init__(self, count):
        self.count = count
        super().__init__(f"aggregated {count} duplicate edge record(s) by summing weights")


class UnknownNodeWarning(TradenetWarning):
    def __init__(self, nodes):
        self.nodes = list(nodes)
        super().__init__(
            f"ignored {len(self.nodes)} partition record(s) for nodes absent from the graph: "
            + ", ".join(self.nodes[:10])
            + (" ..." if len(self.nodes) > 10 else "")
        )


class DegeneracyWarning(TradenetWarning):
    pass
