# exceptions.py
class QuantumClassifierError(Exception):
    """Base class for every error raised by the classifier library"""


class NumericalError(QuantumClassifierError):
    """Failures of the numerical pipeline (CLI exit code 2)"""


class DimensionMismatch(QuantumClassifierError):
    pass


class NonHermitianHamiltonian(QuantumClassifierError):
    pass


class NegativeRate(QuantumClassifierError):
    pass


class ModelTooLarge(QuantumClassifierError):
    pass


class DegenerateSteadyState(NumericalError):
    pass


class NoSteadyState(NumericalError):
    pass


class RouteMismatch(NumericalError):
    pass


class NonFiniteObjective(NumericalError):
    pass


class EmptyDataset(QuantumClassifierError):
    pass


class EmptyInput(QuantumClassifierError):
    pass


class LengthMismatch(QuantumClassifierError):
    pass


class SingleClassDataset(QuantumClassifierError):
    pass


class ConfigError(QuantumClassifierError):
    pass


class MalformedRow(ConfigError):
    """A dataset row that cannot be parsed; carries the 1-based file line number"""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InvalidArgument(QuantumClassifierError, ValueError):
    pass


class InvalidDensityMatrix(NumericalError):
    """A computed state that breaks the density-matrix invariants"""
