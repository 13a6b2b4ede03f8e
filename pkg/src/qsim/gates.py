"""Gate data provider: standard gate matrices, custom unitaries, controlled gates.

Qubit ordering: qubit 0 is the most significant bit of a basis index, so
in an ``n``-qubit register the bit of qubit ``q`` in index ``i`` is
``(i >> (n - 1 - q)) & 1`` and a gate on qubit 0 of two qubits is ``U (x) I``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuit import GateType
from .errors import CircuitError, RegistryLookupError, ValidationError
from .linalg import ComplexMatrix, is_unitary

REGISTRATION_TOL = 1e-9

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def phase_matrix(phi: float) -> ComplexMatrix:
    if not math.isfinite(phi):
        raise CircuitError(f"phase angle must be finite, got {phi!r}")
    e = cmath.exp(1j * phi)
    return ComplexMatrix(2, 2, [1.0, 0.0, 0.0, e.real], [0.0, 0.0, 0.0, e.imag])


_FIXED = {
    "H": ComplexMatrix(2, 2, [_INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2], [0.0] * 4),
    "X": ComplexMatrix(2, 2, [0.0, 1.0, 1.0, 0.0], [0.0] * 4),
    "Y": ComplexMatrix(2, 2, [0.0] * 4, [0.0, -1.0, 1.0, 0.0]),
    "Z": ComplexMatrix(2, 2, [1.0, 0.0, 0.0, -1.0], [0.0] * 4),
    # exact entries rather than cos/sin round-off: S = R(pi/2), T = R(pi/4)
    "S": ComplexMatrix(2, 2, [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]),
    "T": ComplexMatrix(2, 2, [1.0, 0.0, 0.0, _INV_SQRT2], [0.0, 0.0, 0.0, _INV_SQRT2]),
}


def gate_matrix(g: GateType) -> ComplexMatrix:
    """The 2x2 unitary of a standard gate."""
    if g.tag == "R":
        return phase_matrix(g.phi)
    return _FIXED[g.tag]


def _log2_dim(m: ComplexMatrix) -> int | None:
    n = m.rows
    if not m.is_square or n < 2 or n & (n - 1):
        return None
    return n.bit_length() - 1


class GateRegistry:
    """Named unitary matrices for custom functions.

    Every stored matrix is square with a power-of-two dimension (at least 2)
    and unitary to within ``REGISTRATION_TOL``.
    """

    def __init__(self):
        self._entries: dict[str, ComplexMatrix] = {}

    def register(self, name: str, m: ComplexMatrix) -> GateRegistry:
        if not name or not name.isidentifier():
            raise ValidationError(f"function name must be an identifier, got {name!r}")
        if _log2_dim(m) is None:
            raise ValidationError(
                f"{name!r}: matrix must be square with power-of-two dimension >= 2, "
                f"got {m.rows}x{m.cols}"
            )
        if not is_unitary(m, REGISTRATION_TOL):
            raise ValidationError(f"{name!r}: matrix is not unitary within {REGISTRATION_TOL:g}")
        self._entries[name] = m
        return self

    def lookup(self, name: str) -> ComplexMatrix:
        try:
            return self._entries[name]
        except KeyError:
            raise RegistryLookupError(f"no function registered under {name!r}") from None

    def qubit_count(self, name: str) -> int:
        return _log2_dim(self.lookup(name))

    def check_dimension(self, name: str, qubit_count: int) -> ComplexMatrix:
        m = self.lookup(name)
        if m.rows != 1 << qubit_count:
            raise ValidationError(
                f"{name!r} is {m.rows}x{m.cols} but the range spans {qubit_count} qubits "
                f"(needs {1 << qubit_count}x{1 << qubit_count})"
            )
        return m

    def gate(self, g: GateType) -> ComplexMatrix:
        return gate_matrix(g)

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def names(self) -> list[str]:
        return sorted(self._entries)


def register_function(reg: GateRegistry, name: str, m: ComplexMatrix) -> GateRegistry:
    return reg.register(name, m)


def lookup(reg: GateRegistry, name: str) -> ComplexMatrix:
    return reg.lookup(name)


def controlled_unitary(u: ComplexMatrix, control_pos: int, target_pos: int, span: int) -> ComplexMatrix:
    """Controlled-``u`` over ``span`` consecutive qubits, built column by column.

    Positions index the span with position 0 as the most significant bit.
    Columns whose control bit is 0 are identity columns; otherwise ``u`` acts
    on the target bit and every other bit is left as is.
    """
    if u.shape != (2, 2):
        raise CircuitError(f"controlled gate needs a 2x2 unitary, got {u.rows}x{u.cols}")
    if span < 2:
        raise CircuitError(f"span must be at least 2, got {span}")
    for name, pos in (("control", control_pos), ("target", target_pos)):
        if not 0 <= pos < span:
            raise CircuitError(f"{name} position {pos} outside span of {span}")
    if control_pos == target_pos:
        raise CircuitError(f"control and target positions collide at {control_pos}")

    dim = 1 << span
    cbit = 1 << (span - 1 - control_pos)
    tbit = 1 << (span - 1 - target_pos)
    re = np.zeros((dim, dim))
    im = np.zeros((dim, dim))
    for col in range(dim):
        if not col & cbit:
            re[col, col] = 1.0
            continue
        b = 1 if col & tbit else 0
        row0 = col & ~tbit
        row1 = col | tbit
        # column b of u lands on rows (target=0, target=1)
        re[row0, col] = u.re[b]
        im[row0, col] = u.im[b]
        re[row1, col] = u.re[2 + b]
        im[row1, col] = u.im[2 + b]
    return ComplexMatrix(dim, dim, re, im)


def cnot_matrix() -> ComplexMatrix:
    return controlled_unitary(_FIXED["X"], 0, 1, 2)

