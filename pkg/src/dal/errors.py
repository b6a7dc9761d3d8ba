"""Exception hierarchy shared by all modules."""


class DalError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(DalError, ValueError):
    pass


class ConvergenceFailure(DalError, ArithmeticError):
    pass


class ExpmOverflow(DalError, OverflowError):
    pass


class DimensionMismatch(DalError, ValueError):
    pass


class InvalidState(DalError, ValueError):
    pass


class NonUniqueSteadyState(DalError):
    pass


class NotPositive(DalError):
    pass


class ZeroTrace(DalError):
    pass


class EmptySelection(DalError, ValueError):
    pass


class NotConverged(DalError):
    def __init__(self, t_cap: float, distance: float):
        super().__init__(f"trace distance {distance:.3e} still above tolerance at t_cap={t_cap:g}")
        self.t_cap = t_cap
        self.distance = distance


class BracketInvalid(DalError, ValueError):
    pass


class ConfigError(DalError, ValueError):
    pass
