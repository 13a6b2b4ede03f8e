"""Simulator interface and the name -> backend registry."""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable

from .circuit import Circuit, Instruction
from .errors import ResourceError, UnsupportedOperationError
from .gates import GateRegistry
from .state import CollapsedState, StateVector, collapse

BYTES_PER_COMPLEX_NOMINAL = 8
BYTES_PER_COMPLEX_ENGINE = 16


def memory_estimate(n_qubits: int, backend: str) -> int:
    """Bytes needed at 8 bytes per complex number (64-bit complex accounting).

    ``unitary`` counts one ``2^n x 2^n`` step matrix plus the state vector,
    ``fsv`` only the state vector.
    """
    if n_qubits < 1:
        raise ValueError(f"qubit count must be positive, got {n_qubits}")
    dim = 1 << n_qubits
    if backend.startswith("unitary"):
        return (dim * dim + dim) * BYTES_PER_COMPLEX_NOMINAL
    if backend == "fsv":
        return dim * BYTES_PER_COMPLEX_NOMINAL
    raise ValueError(f"unknown backend {backend!r}")


def engine_memory_estimate(n_qubits: int, backend: str) -> int:
    """Peak bytes this implementation allocates (complex128, split storage)."""
    if n_qubits < 1:
        raise ValueError(f"qubit count must be positive, got {n_qubits}")
    dim = 1 << n_qubits
    if backend.startswith("unitary"):
        # step matrix, accumulator and product, plus input and output vectors
        return (3 * dim * dim + 2 * dim) * BYTES_PER_COMPLEX_ENGINE
    if backend == "fsv":
        return 2 * dim * BYTES_PER_COMPLEX_ENGINE
    raise ValueError(f"unknown backend {backend!r}")


def instruction_plan(circuit: Circuit) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(measured, reset)`` qubits, rejecting resets before the last step."""
    measured: list[int] = []
    reset: list[int] = []
    steps = circuit.steps
    for k, step in enumerate(steps):
        for op in step:
            if not isinstance(op, Instruction):
                continue
            if op.kind == "measure":
                if op.target not in measured:
                    measured.append(op.target)
            elif k != len(steps) - 1:
                raise UnsupportedOperationError(
                    f"reset on qubit {op.target} in step {k} of {len(steps)}: "
                    "only a terminal reset is supported"
                )
            else:
                reset.append(op.target)
    return tuple(measured), tuple(reset)


class Simulator(ABC):
    """A simulation backend.

    Subclasses implement :meth:`simulate_full_state`; collapse is derived
    from it.
    """

    name: str = "abstract"
    memory_model: str = "unitary"

    def __init__(self, max_qubits: int):
        self.max_qubits = max_qubits

    def check_resources(self, n_qubits: int, force: bool = False) -> None:
        if force or n_qubits <= self.max_qubits:
            return
        raise ResourceError(
            f"{self.name}: {n_qubits} qubits exceeds the guard of {self.max_qubits} "
            f"(estimate {memory_estimate(n_qubits, self.memory_model):.3e} bytes at 8 B/complex, "
            f"{engine_memory_estimate(n_qubits, self.memory_model):.3e} bytes in this engine)"
        )

    @abstractmethod
    def simulate_full_state(self, circuit: Circuit, registry: GateRegistry | None = None,
                            force: bool = False) -> StateVector:
        ...

    def simulate_and_collapse(self, circuit: Circuit, registry: GateRegistry | None = None,
                              seed: int = 0, force: bool = False) -> CollapsedState:
        """Simulate, then sample one basis state.

        A reset in the final step zeroes that qubit's bit in the outcome.
        """
        measured, reset = instruction_plan(circuit)
        state = self.simulate_full_state(circuit, registry, force=force)
        out = collapse(state, seed, measured)
        index = out.basis_index
        for q in reset:
            index &= ~(1 << (circuit.n_qubits - 1 - q))
        return CollapsedState(out.n_qubits, index, out.measured)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, max_qubits={self.max_qubits})"


_BACKENDS: dict[str, Callable[[], Simulator]] = {}


def register_backend(name: str, factory: Callable[[], Simulator]) -> None:
    _BACKENDS[name] = factory


def get_backend(name: str) -> Simulator:
    try:
        factory = _BACKENDS[name]
    except KeyError:
        raise KeyError(f"unknown backend {name!r}; available: {', '.join(list_backends())}") from None
    return factory()


def list_backends() -> list[str]:
    return list(_BACKENDS)
