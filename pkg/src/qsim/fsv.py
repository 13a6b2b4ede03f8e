"""Full-state-vector backend: gates update amplitude pairs in place.

For a gate ``[[a, b], [c, d]]`` on qubit ``t`` every pair of indices that
differ only in bit ``n-1-t`` is updated as::

    new[i0] = a*old[i0] + b*old[i1]
    new[i1] = c*old[i0] + d*old[i1]

Pairs are enumerated by viewing the state as a ``[2]*n`` tensor, where axis
``q`` is the bit of qubit ``q``; no step matrix is ever built.
"""
from __future__ import annotations

import numpy as np

from .circuit import Circuit, ControlGate, Function, Gate, Instruction
from .errors import CircuitError, ValidationError
from .gates import GateRegistry, gate_matrix
from .linalg import ComplexMatrix
from .simulator import Simulator, instruction_plan
from .state import StateVector, zero_state

DEFAULT_MAX_QUBITS = 24


def _check_target(q: int, n: int, what: str = "target") -> None:
    if not 0 <= q < n:
        raise CircuitError(f"{what} {q} out of range for {n} qubits")


def _pair_update(view: np.ndarray, u: np.ndarray, axis: int) -> None:
    lo = [slice(None)] * view.ndim
    hi = [slice(None)] * view.ndim
    lo[axis] = 0
    hi[axis] = 1
    lo, hi = tuple(lo), tuple(hi)
    a0 = view[lo].copy()
    a1 = view[hi].copy()
    view[lo] = u[0, 0] * a0 + u[0, 1] * a1
    view[hi] = u[1, 0] * a0 + u[1, 1] * a1


def _as_2x2(u: ComplexMatrix) -> np.ndarray:
    if u.shape != (2, 2):
        raise ValidationError(f"expected a 2x2 gate matrix, got {u.rows}x{u.cols}")
    return u.to_array()


def apply_gate_inplace(psi: np.ndarray, u: np.ndarray, target: int, n: int) -> None:
    _pair_update(psi.reshape([2] * n), u, target)


def apply_control_gate_inplace(psi: np.ndarray, u: np.ndarray, control: int, target: int, n: int) -> None:
    tensor = psi.reshape([2] * n)
    sel = [slice(None)] * n
    sel[control] = 1
    # indexing with an int drops the control axis; shift target if it was after it
    _pair_update(tensor[tuple(sel)], u, target if target < control else target - 1)


def apply_function_inplace(psi: np.ndarray, m: np.ndarray, first_qubit: int, qubit_count: int, n: int) -> None:
    block = psi.reshape(1 << first_qubit, 1 << qubit_count, 1 << (n - first_qubit - qubit_count))
    block[...] = m @ block


def _state_array(s: StateVector) -> np.ndarray:
    return s.to_array().astype(np.complex128, copy=True)


def apply_gate(s: StateVector, u: ComplexMatrix, target: int) -> StateVector:
    _check_target(target, s.n_qubits)
    psi = _state_array(s)
    apply_gate_inplace(psi, _as_2x2(u), target, s.n_qubits)
    return StateVector.from_array(psi, check_norm=False)


def apply_control_gate(s: StateVector, u: ComplexMatrix, control: int, target: int) -> StateVector:
    _check_target(control, s.n_qubits, "control")
    _check_target(target, s.n_qubits)
    if control == target:
        raise CircuitError(f"control and target must differ, both are {control}")
    psi = _state_array(s)
    apply_control_gate_inplace(psi, _as_2x2(u), control, target, s.n_qubits)
    return StateVector.from_array(psi, check_norm=False)


def apply_function(s: StateVector, m: ComplexMatrix, first_qubit: int, qubit_count: int) -> StateVector:
    """Multiply the ``2^k`` amplitudes of the range ``[first_qubit, first_qubit + k)`` by ``m``
    for every setting of the qubits outside the range."""
    if qubit_count < 1 or first_qubit < 0 or first_qubit + qubit_count > s.n_qubits:
        raise CircuitError(
            f"range [{first_qubit}, {first_qubit + qubit_count}) invalid for {s.n_qubits} qubits"
        )
    if m.shape != (1 << qubit_count, 1 << qubit_count):
        raise ValidationError(f"{m.rows}x{m.cols} matrix does not fit a {qubit_count}-qubit range")
    psi = _state_array(s)
    apply_function_inplace(psi, m.to_array(), first_qubit, qubit_count, s.n_qubits)
    return StateVector.from_array(psi, check_norm=False)


class FsvSimulator(Simulator):
    name = "fsv"
    memory_model = "fsv"

    def __init__(self, max_qubits: int = DEFAULT_MAX_QUBITS):
        super().__init__(max_qubits)

    def simulate_full_state(self, circuit: Circuit, registry: GateRegistry | None = None,
                            force: bool = False) -> StateVector:
        self.check_resources(circuit.n_qubits, force)
        instruction_plan(circuit)
        n = circuit.n_qubits
        psi = zero_state(n).to_array().astype(np.complex128)
        for op in circuit.operations():
            if isinstance(op, Gate):
                apply_gate_inplace(psi, gate_matrix(op.gate).to_array(), op.target, n)
            elif isinstance(op, ControlGate):
                apply_control_gate_inplace(psi, gate_matrix(op.gate).to_array(), op.control, op.target, n)
            elif isinstance(op, Function):
                if registry is None:
                    raise ValidationError(f"function {op.name!r} needs a registry")
                m = registry.check_dimension(op.name, op.qubit_count)
                apply_function_inplace(psi, m.to_array(), op.first_qubit, op.qubit_count, n)
            elif not isinstance(op, Instruction):
                raise TypeError(f"not an operation: {op!r}")
        return StateVector.from_array(psi, check_norm=False)
