"""Exception hierarchy. Each family maps to one CLI exit code."""


class DvqeError(Exception):
    exit_code = 1


class ParseError(DvqeError, ValueError):
    exit_code = 2


class ConfigError(DvqeError, ValueError):
    exit_code = 3


class DimensionError(ConfigError):
    pass


class CapacityError(ConfigError):
    pass


class NumericError(DvqeError, ArithmeticError):
    exit_code = 4


class EntanglementLeakError(NumericError):
    """Probability mass left on qubits that should have been returned to |0>."""


class ProtocolViolationError(NumericError):
    """A sampled communication qubit read 1."""


class EquivalenceError(NumericError):
    """Monolithic and distributed runs disagreed beyond tolerance."""


class InfeasibleError(DvqeError):
    exit_code = 5

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
