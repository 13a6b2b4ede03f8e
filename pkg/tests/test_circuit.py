import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsim import Circuit, CircuitError, ControlGate, Function, Gate, GateRegistry, Instruction, ValidationError
from qsim.circuit import GateType, H, R, X, dumps, loads, rebuild
from qsim.linalg import identity
from randcirc import random_circuit


def test_bell_packs_into_two_steps():
    c = Circuit(2).h(0).cnot(0, 1)
    assert len(c.steps) == 2
    assert c.steps[0].operations == (Gate(H, 0),)
    assert c.steps[1].operations == (ControlGate(X, 0, 1),)


def test_greedy_packing_only_looks_at_last_step():
    c = Circuit(3).h(0).h(1).x(0).h(2)
    assert [len(s) for s in c.steps] == [2, 2]
    # qubit 2 was free in step 0 too, but packing never goes back
    assert Gate(H, 2) in c.steps[1].operations


def test_control_gate_occupies_only_control_and_target():
    c = Circuit(3).cnot(0, 2).x(1)
    assert len(c.steps) == 1
    assert c.steps[0].qubits == {0, 1, 2}


def test_function_occupies_its_range():
    reg = GateRegistry().register("swapish", identity(4))
    c = Circuit(3).add_function("swapish", 1, 2, reg).h(0).h(2)
    assert [len(s) for s in c.steps] == [2, 1]
    assert Function("swapish", 1, 2).qubits == (1, 2)


def test_qubit_validation():
    with pytest.raises(CircuitError):
        Circuit(0)
    with pytest.raises(CircuitError):
        Circuit(25)
    c = Circuit(2)
    with pytest.raises(CircuitError):
        c.h(2)
    with pytest.raises(CircuitError):
        c.h(-1)
    with pytest.raises(CircuitError):
        c.cnot(1, 1)


def test_gate_type_validation():
    with pytest.raises(CircuitError):
        GateType("Q")
    with pytest.raises(CircuitError):
        R(math.nan)
    with pytest.raises(CircuitError):
        GateType("H", 0.5)
    assert str(R(0.5)) == "R(0.5)"


def test_function_requires_matching_registry_entry():
    reg = GateRegistry().register("u2", identity(4))
    c = Circuit(3)
    with pytest.raises(ValidationError):
        c.add_function("u2", 0, 3, reg)
    with pytest.raises(KeyError):
        c.add_function("missing", 0, 2, reg)
    with pytest.raises(CircuitError):
        c.add_function("u2", 2, 2, reg)


def test_instruction_kinds():
    c = Circuit(2).measure(0).reset(1)
    assert c.operations() == [Instruction("measure", 0), Instruction("reset", 1)]
    with pytest.raises(CircuitError):
        Instruction("peek", 0)


def test_swap_is_three_cnots():
    c = Circuit(3).swap(0, 2)
    assert c.operations() == [ControlGate(X, 0, 2), ControlGate(X, 2, 0), ControlGate(X, 0, 2)]


def test_rebuild_preserves_operations():
    c = Circuit(3).h(0).cnot(0, 1).r(0.3, 2).measure(1)
    assert rebuild(c.operations(), 3).operations() == c.operations()


def test_text_round_trip():
    reg = GateRegistry().register("u2", identity(4))
    c = (Circuit(4).h(0).cnot(0, 3).cr(math.pi / 8, 1, 2).r(0.1234567890123, 3).y(1).cz(2, 0)
         .add_function("u2", 1, 2, reg).measure(0).reset(3))
    text = dumps(c)
    assert text.startswith("QUBITS 4\n")
    back = loads(text, reg)
    assert back.n_qubits == 4
    assert back.operations() == c.operations()
    assert [s.operations for s in back.steps] == [s.operations for s in c.steps]


def test_loads_comments_and_aliases():
    c = loads("# bell\nQUBITS 2\nh 0   # superpose\nCX 0 1\n")
    assert c.operations() == [Gate(H, 0), ControlGate(X, 0, 1)]


@pytest.mark.parametrize("text", [
    "H 0\n",
    "QUBITS 2\nQUBITS 2\n",
    "QUBITS 2\nH 5\n",
    "QUBITS 2\nFOO 1\n",
    "QUBITS 2\nR abc 0\n",
    "QUBITS 2\nCNOT 0\n",
    "QUBITS 2\nFN f 0 2\n",
])
def test_loads_rejects_bad_input(text):
    with pytest.raises(CircuitError):
        loads(text)


def test_loads_reports_line_number():
    with pytest.raises(CircuitError, match="line 3"):
        loads("QUBITS 2\nH 0\nX 9\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(0, 40))
def test_steps_are_disjoint_and_preserve_order(seed, n, n_ops):
    rng = np.random.default_rng(seed)
    if n == 1:
        c = Circuit(1)
        for _ in range(n_ops):
            c.h(0)
    else:
        c = random_circuit(rng, n, n_ops)
    flat = []
    for step in c.steps:
        seen = set()
        for op in step:
            assert not seen & set(op.qubits)
            seen |= set(op.qubits)
        flat.extend(step)
    assert flat == c.operations()
    assert len(flat) == n_ops
    # every new step exists because its first op collided with the previous step
    for prev, cur in zip(c.steps, c.steps[1:]):
        assert set(cur.operations[0].qubits) & prev.qubits
