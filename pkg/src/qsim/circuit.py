"""Circuit data model.

A circuit is an ordered list of steps; each step holds operations on
pairwise disjoint qubits. Operations carry no numeric gate data, only what
gate is applied where. Backends resolve the numbers through a
:class:`~qsim.gates.GateRegistry`.

New operations go into the last step when none of its operations touches
the same qubits, otherwise a new step is opened.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import CircuitError, QsimError

MAX_QUBITS = 24

GATE_TAGS = ("H", "X", "Y", "Z", "S", "T", "R")


@dataclass(frozen=True)
class GateType:
    tag: str
    phi: float | None = None

    def __post_init__(self):
        if self.tag not in GATE_TAGS:
            raise CircuitError(f"unknown gate {self.tag!r}; expected one of {GATE_TAGS}")
        if self.tag == "R":
            if self.phi is None or not math.isfinite(self.phi):
                raise CircuitError(f"phase gate needs a finite angle, got {self.phi!r}")
            object.__setattr__(self, "phi", float(self.phi))
        elif self.phi is not None:
            raise CircuitError(f"gate {self.tag} takes no angle")

    def __str__(self) -> str:
        return f"R({self.phi:g})" if self.tag == "R" else self.tag


H = GateType("H")
X = GateType("X")
Y = GateType("Y")
Z = GateType("Z")
S = GateType("S")
T = GateType("T")


def R(phi: float) -> GateType:
    return GateType("R", phi)


@dataclass(frozen=True)
class Gate:
    gate: GateType
    target: int

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


@dataclass(frozen=True)
class ControlGate:
    gate: GateType
    control: int
    target: int

    def __post_init__(self):
        if self.control == self.target:
            raise CircuitError(f"control and target must differ, both are {self.control}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Function:
    name: str
    first_qubit: int
    qubit_count: int

    def __post_init__(self):
        if self.qubit_count < 1:
            raise CircuitError(f"function must span at least one qubit, got {self.qubit_count}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return tuple(range(self.first_qubit, self.first_qubit + self.qubit_count))


INSTRUCTION_KINDS = ("measure", "reset")


@dataclass(frozen=True)
class Instruction:
    kind: str
    target: int

    def __post_init__(self):
        if self.kind not in INSTRUCTION_KINDS:
            raise CircuitError(f"unknown instruction {self.kind!r}")

    @property
    def qubits(self) -> tuple[int, ...]:
        return (self.target,)


Operation = Union[Gate, ControlGate, Function, Instruction]


@dataclass(frozen=True)
class Step:
    operations: tuple[Operation, ...]

    @property
    def qubits(self) -> frozenset[int]:
        return frozenset(q for op in self.operations for q in op.qubits)

    def __iter__(self) -> Iterator[Operation]:
        return iter(self.operations)

    def __len__(self) -> int:
        return len(self.operations)


class Circuit:
    """Fixed-width quantum circuit with greedy last-step packing.

    Builder methods return the circuit so calls can be chained::

        c = Circuit(2).h(0).cnot(0, 1)
    """

    def __init__(self, n_qubits: int, max_qubits: int = MAX_QUBITS):
        if not isinstance(n_qubits, int) or not 1 <= n_qubits <= max_qubits:
            raise CircuitError(f"qubit count must be in [1, {max_qubits}], got {n_qubits!r}")
        self.n_qubits = n_qubits
        self._steps: list[list[Operation]] = []
        self._last_qubits: set[int] = set()

    @property
    def steps(self) -> tuple[Step, ...]:
        return tuple(Step(tuple(ops)) for ops in self._steps)

    def operations(self) -> list[Operation]:
        """All operations flattened in step order."""
        return [op for ops in self._steps for op in ops]

    def __len__(self) -> int:
        return len(self._steps)

    def __repr__(self) -> str:
        return f"Circuit(n_qubits={self.n_qubits}, steps={len(self._steps)})"

    def _check_qubit(self, q: int, what: str = "qubit") -> None:
        if not isinstance(q, int) or isinstance(q, bool) or not 0 <= q < self.n_qubits:
            raise CircuitError(f"{what} {q!r} out of range for {self.n_qubits}-qubit circuit")

    def _append(self, op: Operation) -> Circuit:
        qs = set(op.qubits)
        if self._steps and not (qs & self._last_qubits):
            self._steps[-1].append(op)
            self._last_qubits |= qs
        else:
            self._steps.append([op])
            self._last_qubits = qs
        return self

    # generic builders

    def add_gate(self, gate: GateType, target: int) -> Circuit:
        self._check_qubit(target, "target")
        return self._append(Gate(gate, target))

    def add_control_gate(self, gate: GateType, control: int, target: int) -> Circuit:
        self._check_qubit(control, "control")
        self._check_qubit(target, "target")
        return self._append(ControlGate(gate, control, target))

    def add_function(self, name: str, first_qubit: int, qubit_count: int, registry) -> Circuit:
        """Append a registered custom unitary over ``[first_qubit, first_qubit + qubit_count)``.

        The registry must hold a ``2**qubit_count`` square matrix under ``name``.
        """
        if qubit_count < 1:
            raise CircuitError(f"qubit_count must be positive, got {qubit_count}")
        self._check_qubit(first_qubit, "first_qubit")
        if first_qubit + qubit_count > self.n_qubits:
            raise CircuitError(
                f"range [{first_qubit}, {first_qubit + qubit_count}) exceeds "
                f"{self.n_qubits}-qubit circuit"
            )
        registry.check_dimension(name, qubit_count)
        return self._append(Function(name, first_qubit, qubit_count))

    def add_instruction(self, kind: str, target: int) -> Circuit:
        self._check_qubit(target, "target")
        return self._append(Instruction(kind, target))

    def add(self, op: Operation, registry=None) -> Circuit:
        """Re-add an existing operation object through the matching builder."""
        if isinstance(op, Gate):
            return self.add_gate(op.gate, op.target)
        if isinstance(op, ControlGate):
            return self.add_control_gate(op.gate, op.control, op.target)
        if isinstance(op, Function):
            if registry is None:
                raise CircuitError(f"function {op.name!r} needs a registry")
            return self.add_function(op.name, op.first_qubit, op.qubit_count, registry)
        if isinstance(op, Instruction):
            return self.add_instruction(op.kind, op.target)
        raise TypeError(f"not an operation: {op!r}")

    # named shortcuts

    def h(self, q: int) -> Circuit:
        return self.add_gate(H, q)

    def x(self, q: int) -> Circuit:
        return self.add_gate(X, q)

    def y(self, q: int) -> Circuit:
        return self.add_gate(Y, q)

    def z(self, q: int) -> Circuit:
        return self.add_gate(Z, q)

    def s(self, q: int) -> Circuit:
        return self.add_gate(S, q)

    def t(self, q: int) -> Circuit:
        return self.add_gate(T, q)

    def r(self, phi: float, q: int) -> Circuit:
        return self.add_gate(R(phi), q)

    def cnot(self, control: int, target: int) -> Circuit:
        return self.add_control_gate(X, control, target)

    def cz(self, control: int, target: int) -> Circuit:
        return self.add_control_gate(Z, control, target)

    def cr(self, phi: float, control: int, target: int) -> Circuit:
        return self.add_control_gate(R(phi), control, target)

    def swap(self, a: int, b: int) -> Circuit:
        """Swap two qubits using three CNOTs."""
        return self.cnot(a, b).cnot(b, a).cnot(a, b)

    def measure(self, q: int) -> Circuit:
        return self.add_instruction("measure", q)

    def reset(self, q: int) -> Circuit:
        return self.add_instruction("reset", q)


def rebuild(ops: Iterable[Operation], n_qubits: int, registry=None) -> Circuit:
    c = Circuit(n_qubits)
    for op in ops:
        c.add(op, registry)
    return c


# --- text format -------------------------------------------------------------
#
#   QUBITS 4
#   H 0
#   CNOT 0 3
#   R 1.5707963 2
#   CR 0.7853981 0 2
#   FN oracle 0 4
#   MEASURE 0
#
# Controlled gates are the gate tag prefixed with C (CNOT is the X case).

_CONTROLLED = {"CNOT": "X", "CX": "X", "CY": "Y", "CZ": "Z", "CH": "H", "CS": "S", "CT": "T"}
_CONTROLLED_NAME = {"X": "CNOT", "Y": "CY", "Z": "CZ", "H": "CH", "S": "CS", "T": "CT"}


def _format_op(op: Operation) -> str:
    if isinstance(op, Gate):
        if op.gate.tag == "R":
            return f"R {op.gate.phi!r} {op.target}"
        return f"{op.gate.tag} {op.target}"
    if isinstance(op, ControlGate):
        if op.gate.tag == "R":
            return f"CR {op.gate.phi!r} {op.control} {op.target}"
        return f"{_CONTROLLED_NAME[op.gate.tag]} {op.control} {op.target}"
    if isinstance(op, Function):
        return f"FN {op.name} {op.first_qubit} {op.qubit_count}"
    return f"{op.kind.upper()} {op.target}"


def dumps(circuit: Circuit) -> str:
    lines = [f"QUBITS {circuit.n_qubits}"]
    lines += [_format_op(op) for op in circuit.operations()]
    return "\n".join(lines) + "\n"


def loads(text: str, registry=None) -> Circuit:
    """Parse the line format produced by :func:`dumps`; steps are re-packed."""
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        head = head.upper()
        try:
            if head == "QUBITS":
                if circuit is not None:
                    raise CircuitError("duplicate QUBITS header")
                (n,) = args
                circuit = Circuit(int(n))
                continue
            if circuit is None:
                raise CircuitError("missing QUBITS header before first operation")
            if head in GATE_TAGS and head != "R":
                (q,) = args
                circuit.add_gate(GateType(head), int(q))
            elif head == "R":
                phi, q = args
                circuit.add_gate(R(float(phi)), int(q))
            elif head in _CONTROLLED:
                c, t = args
                circuit.add_control_gate(GateType(_CONTROLLED[head]), int(c), int(t))
            elif head == "CR":
                phi, c, t = args
                circuit.add_control_gate(R(float(phi)), int(c), int(t))
            elif head == "FN":
                name, first, count = args
                if registry is None:
                    raise CircuitError(f"function {name!r} needs a registry")
                circuit.add_function(name, int(first), int(count), registry)
            elif head in ("MEASURE", "RESET"):
                (q,) = args
                circuit.add_instruction(head.lower(), int(q))
            else:
                raise CircuitError(f"unknown operation {head!r}")
        except CircuitError as exc:
            raise CircuitError(f"line {lineno}: {exc}") from exc
        except QsimError:
            raise
        except ValueError as exc:
            # bad arity or unparsable numbers
            raise CircuitError(f"line {lineno}: {exc}") from exc
    if circuit is None:
        raise CircuitError("empty circuit text: missing QUBITS header")
    return circuit
