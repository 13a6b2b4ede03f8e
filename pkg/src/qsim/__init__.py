"""Quantum circuit simulator with interchangeable unitary-matrix and state-vector backends."""
from .circuit import Circuit, ControlGate, Function, Gate, GateType, Instruction, Step
from .errors import (
    CircuitError,
    QsimError,
    RegistryLookupError,
    ResourceError,
    ShapeError,
    UnsupportedOperationError,
    ValidationError,
)
from .fsv import FsvSimulator
from .gates import GateRegistry, controlled_unitary, gate_matrix
from .linalg import ComplexMatrix, ComplexVector, identity, is_unitary, kronecker, matmul, matvec
from .simulator import (
    Simulator,
    engine_memory_estimate,
    get_backend,
    list_backends,
    memory_estimate,
    register_backend,
)
from .state import CollapsedState, StateVector, collapse, format_state, probabilities, zero_state
from .unitary import UnitarySimulator

register_backend("unitary", lambda: UnitarySimulator("serial"))
register_backend("unitary-parallel", lambda: UnitarySimulator("parallel"))
register_backend("fsv", FsvSimulator)

__version__ = "0.1.0"
