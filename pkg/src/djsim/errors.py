"""Exception hierarchy shared by every djsim module."""


class DJSimError(Exception):
    """Base class for all simulator errors."""


class QubitCountError(DJSimError, ValueError):
    """Requested register size is outside the supported range."""


class QubitRangeError(DJSimError, IndexError):
    """Qubit index does not exist in the target state."""


class AliasingError(DJSimError, ValueError):
    """Control and target of a controlled gate coincide."""


class UnitarityError(DJSimError, ValueError):
    """Matrix handed to the simulator is not unitary."""


class PermutationError(DJSimError, ValueError):
    """Index map is not a bijection on the basis."""


class NormalizationError(DJSimError, ArithmeticError):
    """State drifted off the unit sphere after an operation."""


class GateError(DJSimError, ValueError):
    """Unknown gate name or wrong parameter count."""


class TruthTableError(DJSimError, ValueError):
    """Malformed truth table text or array.

    ``line`` is the 1-based source line when the table came from text.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PromiseViolation(DJSimError):
    """Function handed to Deutsch-Jozsa is neither constant nor balanced."""

    def __init__(self, message, probability=None):
        self.probability = probability
        super().__init__(message)


class UnsupportedFeature(DJSimError):
    """Circuit uses a construct outside the supported subset."""
