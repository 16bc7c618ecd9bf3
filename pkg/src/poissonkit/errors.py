"""Exception hierarchy shared by every module."""


class PoissonKitError(Exception):
    """Base class for all library errors."""


class ParseError(PoissonKitError):
    def __init__(self, message, position=None, text=None):
        self.message = message
        self.position = position
        self.text = text
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")


class UnsupportedModeError(PoissonKitError):
    """An operation needing exact equality received a NUMERIC scalar."""


class DenominatorVanishes(PoissonKitError, ZeroDivisionError):
    def __init__(self, point=None, message="denominator vanishes"):
        self.point = point
        super().__init__(f"{message} at {point}" if point is not None else message)


class DomainError(PoissonKitError, ValueError):
    def __init__(self, point=None, message="outside the domain of a partial function"):
        self.point = point
        super().__init__(f"{message} at {point}" if point is not None else message)


class ArityError(PoissonKitError, ValueError):
    pass


class NotAnImmersion(PoissonKitError):
    def __init__(self, point, rank):
        self.point = point
        self.rank = rank
        super().__init__(f"differential has rank {rank} at {point}")


class NotASubmersion(PoissonKitError):
    def __init__(self, point, rank):
        self.point = point
        self.rank = rank
        super().__init__(f"differential has rank {rank} at {point}")


class NotLagrangian(PoissonKitError):
    pass


class PreconditionError(PoissonKitError):
    """Input violates a documented precondition; carries an optional witness."""

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class PolytopeError(PoissonKitError):
    def __init__(self, kind, message, witness=None):
        self.kind = kind
        self.witness = witness
        super().__init__(f"{kind}: {message}")


class StepSizeError(PoissonKitError):
    def __init__(self, message, time=None, estimate=None):
        self.time = time
        self.estimate = estimate
        super().__init__(message)


class DslError(ParseError):
    """Malformed input file; carries a 1-based line and column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
        ParseError.__init__(self, f"{where}: {message}" if where else message)
        self.message = message
