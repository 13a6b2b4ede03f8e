"""Unitary-matrix backend.

Every step becomes a ``2^n x 2^n`` matrix by Kronecker-folding the per-qubit
operand list; the step matrices are multiplied into one circuit unitary,
which is finally applied to ``|0...0>``.
"""
from __future__ import annotations

from functools import reduce

from .circuit import Circuit, ControlGate, Function, Gate, Instruction, Operation, Step
from .errors import QsimError
from .gates import GateRegistry, controlled_unitary, gate_matrix
from .linalg import ComplexMatrix, Mode, identity, kronecker, matmul, matvec
from .simulator import Simulator, instruction_plan
from .state import StateVector, zero_state

DEFAULT_MAX_QUBITS = 14


class LayoutError(QsimError):
    """Operand spans inside a step overlap or leave gaps."""


def operand_span(op: Operation) -> tuple[int, int]:
    """Inclusive qubit range ``(lo, hi)`` covered by the operand matrix of ``op``."""
    if isinstance(op, ControlGate):
        return min(op.control, op.target), max(op.control, op.target)
    if isinstance(op, Function):
        return op.first_qubit, op.first_qubit + op.qubit_count - 1
    return op.target, op.target


def operand_matrix(op: Operation, registry: GateRegistry | None) -> ComplexMatrix:
    if isinstance(op, Gate):
        return gate_matrix(op.gate)
    if isinstance(op, ControlGate):
        lo, hi = operand_span(op)
        return controlled_unitary(gate_matrix(op.gate), op.control - lo, op.target - lo, hi - lo + 1)
    if isinstance(op, Function):
        if registry is None:
            raise LayoutError(f"function {op.name!r} needs a registry")
        return registry.check_dimension(op.name, op.qubit_count)
    if isinstance(op, Instruction):
        return identity(2)
    raise TypeError(f"not an operation: {op!r}")


def split_step(step: Step) -> list[Step]:
    """Split a step into sub-steps whose operand spans do not overlap.

    Operations in a step act on disjoint qubits, but a controlled gate's
    matrix also covers the qubits between control and target. When another
    operation sits in that gap the two cannot share one Kronecker fold; since
    they commute, they are moved to separate sub-steps.
    """
    layers: list[list[Operation]] = []
    occupied: list[set[int]] = []
    for op in step:
        lo, hi = operand_span(op)
        span = set(range(lo, hi + 1))
        for ops, used in zip(layers, occupied):
            if not used & span:
                ops.append(op)
                used |= span
                break
        else:
            layers.append([op])
            occupied.append(span)
    return [Step(tuple(ops)) for ops in layers]


def step_operand_list(step: Step, n_qubits: int, registry: GateRegistry | None = None) -> list[ComplexMatrix]:
    """Operand matrices ordered from qubit 0 down; identity for idle qubits."""
    starts: dict[int, Operation] = {}
    owner: dict[int, Operation] = {}
    for op in step:
        lo, hi = operand_span(op)
        if lo < 0 or hi >= n_qubits:
            raise LayoutError(f"{op} reaches outside a {n_qubits}-qubit register")
        for q in range(lo, hi + 1):
            if q in owner:
                raise LayoutError(f"qubit {q} is covered by both {owner[q]} and {op}")
            owner[q] = op
        starts[lo] = op

    operands = []
    q = 0
    while q < n_qubits:
        op = starts.get(q)
        if op is None:
            operands.append(identity(2))
            q += 1
            continue
        lo, hi = operand_span(op)
        operands.append(operand_matrix(op, registry))
        q = hi + 1
    return operands


def step_unitary(step: Step, n_qubits: int, registry: GateRegistry | None = None) -> ComplexMatrix:
    operands = step_operand_list(step, n_qubits, registry)
    return reduce(kronecker, operands[1:], operands[0])


def circuit_unitaries(circuit: Circuit, registry: GateRegistry | None = None) -> list[ComplexMatrix]:
    """Step matrices in application order (overlapping steps already split)."""
    return [
        step_unitary(sub, circuit.n_qubits, registry)
        for step in circuit.steps
        for sub in split_step(step)
    ]


def circuit_unitary(circuit: Circuit, registry: GateRegistry | None = None,
                    mode: Mode = "serial", workers: int | None = None) -> ComplexMatrix:
    result = identity(1 << circuit.n_qubits)
    for a in circuit_unitaries(circuit, registry):
        result = matmul(a, result, mode, workers)
    return result


class UnitarySimulator(Simulator):
    """Accumulates ``result <- A . result`` over all step matrices ``A``.

    ``mode="parallel"`` runs each matrix product over ``workers`` threads.
    """

    memory_model = "unitary"

    def __init__(self, mode: Mode = "serial", workers: int | None = None,
                 max_qubits: int = DEFAULT_MAX_QUBITS):
        super().__init__(max_qubits)
        self.mode = mode
        self.workers = workers
        self.name = "unitary" if mode == "serial" else "unitary-parallel"

    def simulate_full_state(self, circuit, registry=None, force=False) -> StateVector:
        self.check_resources(circuit.n_qubits, force)
        instruction_plan(circuit)
        u = circuit_unitary(circuit, registry, self.mode, self.workers)
        psi = zero_state(circuit.n_qubits)
        return StateVector(circuit.n_qubits, matvec(u, psi.amplitudes))
