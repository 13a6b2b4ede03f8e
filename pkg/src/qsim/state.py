"""State vectors, probabilities and seeded measurement collapse."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeError, ValidationError
from .linalg import ComplexVector

NORM_TOL = 1e-9

# Bit generator used for collapse; recorded in JSON output so outcomes can be reproduced.
RNG_ALGORITHM = "numpy.PCG64"

_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True, eq=False)
class StateVector:
    n_qubits: int
    amplitudes: ComplexVector

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ShapeError(f"qubit count must be positive, got {self.n_qubits}")
        if self.amplitudes.len != 1 << self.n_qubits:
            raise ShapeError(
                f"{self.n_qubits} qubits need {1 << self.n_qubits} amplitudes, "
                f"got {self.amplitudes.len}"
            )

    @classmethod
    def from_array(cls, arr, check_norm: bool = True) -> StateVector:
        vec = ComplexVector.from_array(arr)
        n = vec.len.bit_length() - 1
        if vec.len != 1 << n:
            raise ShapeError(f"amplitude count {vec.len} is not a power of two")
        state = cls(n, vec)
        if check_norm and abs(state.norm_squared() - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized: |psi|^2 = {state.norm_squared()!r}")
        return state

    def to_array(self) -> np.ndarray:
        return self.amplitudes.to_array()

    def norm_squared(self) -> float:
        return self.amplitudes.norm_squared()

    def max_abs_diff(self, other: StateVector) -> float:
        return self.amplitudes.max_abs_diff(other.amplitudes)

    def bitstring(self, index: int) -> str:
        return format(index, f"0{self.n_qubits}b")

    def to_json(self, **extra) -> str:
        payload = {
            "qubits": self.n_qubits,
            "amplitudes": [
                {"re": float(r), "im": float(i)}
                for r, i in zip(self.amplitudes.re, self.amplitudes.im)
            ],
        }
        payload.update(extra)
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> StateVector:
        data = json.loads(text)
        amps = [complex(a["re"], a["im"]) for a in data["amplitudes"]]
        state = cls.from_array(amps, check_norm=False)
        if state.n_qubits != data["qubits"]:
            raise ShapeError(f"header says {data['qubits']} qubits, got {state.n_qubits}")
        return state

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


@dataclass(frozen=True)
class CollapsedState:
    """Basis state selected by a measurement.

    ``measured`` lists the qubits with measure instructions in the circuit
    (empty when the whole register is read out).
    """

    n_qubits: int
    basis_index: int
    measured: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not 0 <= self.basis_index < 1 << self.n_qubits:
            raise ShapeError(f"basis index {self.basis_index} outside {self.n_qubits}-qubit register")

    @property
    def bitstring(self) -> str:
        """Bits with qubit 0 leftmost."""
        return format(self.basis_index, f"0{self.n_qubits}b")

    @property
    def measured_bits(self) -> str:
        qubits = self.measured or tuple(range(self.n_qubits))
        return "".join(self.bitstring[q] for q in qubits)

    def bit(self, qubit: int) -> int:
        return (self.basis_index >> (self.n_qubits - 1 - qubit)) & 1


def zero_state(n: int) -> StateVector:
    if n < 1:
        raise ShapeError(f"qubit count must be positive, got {n}")
    re = np.zeros(1 << n)
    re[0] = 1.0
    return StateVector(n, ComplexVector(1 << n, re, np.zeros(1 << n)))


def probabilities(s: StateVector) -> np.ndarray:
    re, im = s.amplitudes.re, s.amplitudes.im
    return re * re + im * im


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & _SEED_MASK))


def sample_index(probs: np.ndarray, u: float) -> int:
    """First index whose running probability total strictly exceeds ``u``.

    Zero-probability entries never win: their running total equals the
    previous one. If round-off leaves the total below ``u``, the last index
    with non-zero probability is returned.
    """
    cumulative = np.cumsum(probs)  # sequential, left to right
    i = int(np.searchsorted(cumulative, u, side="right"))
    if i < len(probs):
        return i
    nonzero = np.flatnonzero(probs)
    if nonzero.size == 0:
        raise ValidationError("cannot sample from an all-zero distribution")
    return int(nonzero[-1])


def collapse(s: StateVector, seed: int, measured: tuple[int, ...] = ()) -> CollapsedState:
    """Sample one basis state by inverse-CDF with a PCG64 stream seeded by ``seed``."""
    u = make_rng(seed).random()
    return CollapsedState(s.n_qubits, sample_index(probabilities(s), u), tuple(measured))


def format_state(s: StateVector, threshold: float = 1e-9, digits: int = 4) -> str:
    """Bra-ket listing such as ``0.7071|00⟩ + 0.7071|11⟩``.

    Amplitudes with magnitude at or below ``threshold`` are dropped; complex
    amplitudes are printed as ``(a+bi)``.
    """
    if threshold < 0:
        raise ValueError(f"threshold must be non-negative, got {threshold}")
    terms = []
    for i, (r, m) in enumerate(zip(s.amplitudes.re, s.amplitudes.im)):
        if np.hypot(r, m) <= threshold:
            continue
        if abs(m) <= threshold:
            coef = f"{r:.{digits}f}"
        elif abs(r) <= threshold:
            coef = f"{m:.{digits}f}i"
        else:
            coef = f"({r:.{digits}f}{m:+.{digits}f}i)"
        terms.append(f"{coef}|{s.bitstring(i)}⟩")
    if not terms:
        return "0"
    out = terms[0]
    for term in terms[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out
