"""Exception hierarchy shared across the simulator."""


class QsimError(Exception):
    """Base class for all simulator errors."""


class ShapeError(QsimError, ValueError):
    """Operand dimensions do not conform."""


class CircuitError(QsimError, ValueError):
    """Invalid argument when building a circuit (qubit out of range, etc.)."""


class RegistryLookupError(QsimError, KeyError):
    """A custom function name is not registered."""

    def __str__(self) -> str:
        # KeyError repr-quotes its message otherwise
        return str(self.args[0]) if self.args else ""


class ValidationError(QsimError, ValueError):
    """Matrix data failed a structural or unitarity check."""


class ResourceError(QsimError):
    """Simulation would exceed a configured memory guard."""


class UnsupportedOperationError(QsimError):
    """Operation is valid in the model but not supported by a backend."""
