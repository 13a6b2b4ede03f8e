"""Benchmark circuit generators: Bell, fully entangled (GHZ), Deutsch-Jozsa, QFT."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .circuit import Circuit
from .errors import CircuitError
from .gates import GateRegistry
from .linalg import ComplexMatrix

BooleanFunction = Callable[[int], int]

ORACLE_NAME = "oracle"


def bell() -> Circuit:
    return Circuit(2).h(0).cnot(0, 1)


def fully_entangled(n: int) -> Circuit:
    """H on qubit 0, then CNOTs from qubit 0 to qubits n-1, n-2, ..., 1."""
    if n < 2:
        raise CircuitError(f"fully entangled circuit needs at least 2 qubits, got {n}")
    c = Circuit(n).h(0)
    for target in range(n - 1, 0, -1):
        c.cnot(0, target)
    return c


def oracle_matrix(n_inputs: int, f: BooleanFunction) -> ComplexMatrix:
    """Permutation ``|x, y> -> |x, y XOR f(x)>``; the ancilla ``y`` is the last (least significant) qubit.

    ``f`` receives ``x`` as an integer whose most significant bit is input qubit 0.
    """
    if n_inputs < 1:
        raise CircuitError(f"oracle needs at least one input, got {n_inputs}")
    dim = 1 << (n_inputs + 1)
    re = np.zeros((dim, dim))
    for x in range(1 << n_inputs):
        fx = int(f(x))
        if fx not in (0, 1):
            raise CircuitError(f"f({x}) returned {fx!r}, expected 0 or 1")
        for y in (0, 1):
            re[(x << 1) | (y ^ fx), (x << 1) | y] = 1.0
    return ComplexMatrix(dim, dim, re, np.zeros((dim, dim)))


def deutsch_jozsa(n_inputs: int, f: BooleanFunction, name: str = ORACLE_NAME) -> tuple[Circuit, GateRegistry]:
    """Deutsch-Jozsa circuit on ``n_inputs + 1`` qubits with the oracle registered as ``name``.

    A constant ``f`` leaves the inputs in ``|0...0>``; a balanced one gives
    that outcome probability zero.
    """
    n = n_inputs + 1
    registry = GateRegistry().register(name, oracle_matrix(n_inputs, f))
    c = Circuit(n).x(n - 1)
    for q in range(n):
        c.h(q)
    c.add_function(name, 0, n, registry)
    for q in range(n_inputs):
        c.h(q)
    for q in range(n_inputs):
        c.measure(q)
    return c, registry


def all_zero_input_probability(probs: np.ndarray) -> float:
    """Probability that every input qubit reads 0 (the ancilla is free)."""
    return float(probs[0] + probs[1])


def qft(n: int) -> Circuit:
    """Quantum Fourier transform; its unitary is the DFT matrix ``w^(jk)/sqrt(2^n)``, ``w = e^(2 pi i/2^n)``."""
    c = Circuit(n)
    for k in range(n):
        c.h(k)
        for j in range(1, n - k):
            c.cr(math.pi / (1 << j), k + j, k)
    for q in range(n // 2):
        c.swap(q, n - 1 - q)
    return c


# --- oracle specs ------------------------------------------------------------


def constant(value: int) -> BooleanFunction:
    return lambda x: value


def balanced_bit(n_inputs: int, k: int) -> BooleanFunction:
    """f(x) = value of input qubit k."""
    if not 0 <= k < n_inputs:
        raise CircuitError(f"bit {k} out of range for {n_inputs} inputs")
    shift = n_inputs - 1 - k
    return lambda x: (x >> shift) & 1


def balanced_mask(n_inputs: int, mask: int) -> BooleanFunction:
    """f(x) = parity of ``x & mask``; balanced for any non-zero mask."""
    if not 0 < mask < 1 << n_inputs:
        raise CircuitError(f"mask {mask:#x} must be non-zero and fit {n_inputs} inputs")
    return lambda x: bin(x & mask).count("1") & 1


def parse_oracle(spec: str, n_inputs: int, seed: int = 0) -> BooleanFunction:
    """``constant0 | constant1 | balanced-bit:<k> | balanced-mask:<hex> | random``.

    ``random`` picks a balanced mask oracle from ``seed``.
    """
    if spec == "random":
        mask = int(np.random.default_rng(seed).integers(1, 1 << n_inputs))
        return balanced_mask(n_inputs, mask)
    if spec == "constant0":
        return constant(0)
    if spec == "constant1":
        return constant(1)
    kind, _, arg = spec.partition(":")
    try:
        if kind == "balanced-bit" and arg:
            return balanced_bit(n_inputs, int(arg))
        if kind == "balanced-mask" and arg:
            return balanced_mask(n_inputs, int(arg, 16))
    except ValueError as exc:
        raise CircuitError(f"bad oracle spec {spec!r}: {exc}") from None
    raise CircuitError(
        f"unknown oracle {spec!r}; expected constant0, constant1, balanced-bit:<k> or balanced-mask:<hex>"
    )


DEFAULT_ORACLE = "balanced-bit:0"


def _bell(n: int, oracle: str | None, seed: int = 0):
    if n != 2:
        raise CircuitError(f"bell circuit has exactly 2 qubits, got {n}")
    return bell(), None


def _dj(n: int, oracle: str | None, seed: int = 0):
    if n < 2:
        raise CircuitError(f"deutsch-jozsa needs at least 2 qubits (1 input + ancilla), got {n}")
    return deutsch_jozsa(n - 1, parse_oracle(oracle or DEFAULT_ORACLE, n - 1, seed))


GENERATORS: dict[str, Callable[..., tuple[Circuit, GateRegistry | None]]] = {
    "bell": _bell,
    "entangle": lambda n, oracle=None, seed=0: (fully_entangled(n), None),
    "deutsch-jozsa": _dj,
    "qft": lambda n, oracle=None, seed=0: (qft(n), None),
}


def build(name: str, n_qubits: int, oracle: str | None = None,
          seed: int = 0) -> tuple[Circuit, GateRegistry | None]:
    """Generate a named circuit; ``oracle`` only applies to ``deutsch-jozsa``."""
    try:
        gen = GENERATORS[name]
    except KeyError:
        raise KeyError(f"unknown circuit {name!r}; available: {', '.join(GENERATORS)}") from None
    return gen(n_qubits, oracle, seed)
