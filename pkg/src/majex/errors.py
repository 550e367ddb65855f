"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Register size outside the dense-simulation range."""


class InvalidStateError(ValueError):
    """State vector unusable (e.g. zero norm)."""


class ImpossibleOutcomeError(ValueError):
    """Requested projection branch has (numerically) zero probability."""


class TopologyError(ValueError):
    """Lattice edges do not form the required exchange pattern."""


class RoutingError(ValueError):
    """Circuit cannot be realized under the device connectivity."""


class UndefinedStatisticError(ValueError):
    """Statistic requested on an empty shot table."""


class ParseError(ValueError):
    """Circuit text rejected; carries the offending location."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
