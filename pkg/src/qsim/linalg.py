"""Dense complex linear algebra on split real/imaginary storage.

Matrices keep their real and imaginary parts in two flat row-major float64
arrays. The multiply kernel is a plain triple loop compiled with numba; the
parallel mode runs the same kernel over contiguous row chunks on a thread
pool, so every output element is produced by one worker with the same
operation order and parallel results are bit-identical to serial ones.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numba
import numpy as np

from .errors import ShapeError

Mode = Literal["serial", "parallel"]
MODES = ("serial", "parallel")

THREADS_ENV = "QSIM_THREADS"


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True).reshape(-1)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ComplexMatrix:
    """Dense ``rows x cols`` complex matrix; entry (i, j) is at ``i*cols + j``."""

    rows: int
    cols: int
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        object.__setattr__(self, "re", _frozen(self.re))
        object.__setattr__(self, "im", _frozen(self.im))
        size = self.rows * self.cols
        if self.re.size != size or self.im.size != size:
            raise ShapeError(
                f"expected {size} entries for {self.rows}x{self.cols}, "
                f"got re={self.re.size}, im={self.im.size}"
            )

    @classmethod
    def from_array(cls, arr) -> ComplexMatrix:
        a = np.asarray(arr, dtype=np.complex128)
        if a.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {a.shape}")
        return cls(a.shape[0], a.shape[1], a.real, a.imag)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ComplexMatrix:
        return cls(rows, cols, np.zeros(rows * cols), np.zeros(rows * cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def to_array(self) -> np.ndarray:
        return (self.re + 1j * self.im).reshape(self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> complex:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        k = i * self.cols + j
        return complex(self.re[k], self.im[k])

    def adjoint(self) -> ComplexMatrix:
        re = self.re.reshape(self.rows, self.cols).T
        im = -self.im.reshape(self.rows, self.cols).T
        return ComplexMatrix(self.cols, self.rows, re, im)

    def max_abs_diff(self, other: ComplexMatrix) -> float:
        if self.shape != other.shape:
            raise ShapeError(f"cannot compare {self.shape} with {other.shape}")
        return float(np.max(np.hypot(self.re - other.re, self.im - other.im)))

    def __repr__(self) -> str:
        return f"ComplexMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """Complex vector of length ``len`` in split storage."""

    len: int
    re: np.ndarray
    im: np.ndarray

    def __post_init__(self):
        if self.len < 1:
            raise ShapeError(f"vector length must be positive, got {self.len}")
        object.__setattr__(self, "re", _frozen(self.re))
        object.__setattr__(self, "im", _frozen(self.im))
        if self.re.size != self.len or self.im.size != self.len:
            raise ShapeError(
                f"expected {self.len} entries, got re={self.re.size}, im={self.im.size}"
            )

    @classmethod
    def from_array(cls, arr) -> ComplexVector:
        a = np.asarray(arr, dtype=np.complex128).reshape(-1)
        return cls(a.size, a.real, a.imag)

    def to_array(self) -> np.ndarray:
        return self.re + 1j * self.im

    def __len__(self) -> int:
        return self.len

    def __getitem__(self, i: int) -> complex:
        return complex(self.re[i], self.im[i])

    def norm_squared(self) -> float:
        return float(np.sum(self.re * self.re + self.im * self.im))

    def max_abs_diff(self, other: ComplexVector) -> float:
        if self.len != other.len:
            raise ShapeError(f"cannot compare length {self.len} with {other.len}")
        return float(np.max(np.hypot(self.re - other.re, self.im - other.im)))

    def __repr__(self) -> str:
        return f"ComplexVector({self.len})"


# --- kernels -----------------------------------------------------------------


@numba.njit(nogil=True, cache=True)
def _matmul_rows(a_re, a_im, b_re, b_im, c_re, c_im, cols_a, cols_b, row_start, row_stop):
    # k ascending per output element; the row buffer only changes memory traffic
    row_re = np.empty(cols_b)
    row_im = np.empty(cols_b)
    for i in range(row_start, row_stop):
        row_re[:] = 0.0
        row_im[:] = 0.0
        for k in range(cols_a):
            ar = a_re[i * cols_a + k]
            ai = a_im[i * cols_a + k]
            b_re_k = b_re[k * cols_b:(k + 1) * cols_b]
            b_im_k = b_im[k * cols_b:(k + 1) * cols_b]
            for j in range(cols_b):
                row_re[j] += (ar * b_re_k[j]) - (ai * b_im_k[j])
                row_im[j] += (ar * b_im_k[j]) + (ai * b_re_k[j])
        c_re[i * cols_b:(i + 1) * cols_b] = row_re
        c_im[i * cols_b:(i + 1) * cols_b] = row_im


@numba.njit(nogil=True, cache=True)
def _matvec(a_re, a_im, v_re, v_im, out_re, out_im, rows, cols):
    for i in range(rows):
        acc_re = 0.0
        acc_im = 0.0
        for k in range(cols):
            ar = a_re[i * cols + k]
            ai = a_im[i * cols + k]
            acc_re += (ar * v_re[k]) - (ai * v_im[k])
            acc_im += (ar * v_im[k]) + (ai * v_re[k])
        out_re[i] = acc_re
        out_im[i] = acc_im


# --- execution ---------------------------------------------------------------


def default_workers() -> int:
    """Worker pool size: ``QSIM_THREADS`` if set, else the usable CPU count."""
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {env!r}")
        return n
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # not available on macOS / Windows
        return os.cpu_count() or 1


def hardware_threads() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@lru_cache(maxsize=None)
def _pool(workers: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=workers, thread_name_prefix="qsim-matmul")


def row_chunks(rows: int, workers: int) -> list[tuple[int, int]]:
    """Split ``range(rows)`` into at most ``workers`` contiguous, non-empty chunks."""
    workers = max(1, min(workers, rows))
    base, extra = divmod(rows, workers)
    chunks = []
    start = 0
    for w in range(workers):
        stop = start + base + (1 if w < extra else 0)
        chunks.append((start, stop))
        start = stop
    return chunks


def identity(n: int) -> ComplexMatrix:
    if n < 1:
        raise ShapeError(f"identity dimension must be positive, got {n}")
    return ComplexMatrix(n, n, np.eye(n).reshape(-1), np.zeros(n * n))


def matmul(
    a: ComplexMatrix, b: ComplexMatrix, mode: Mode = "serial", workers: int | None = None
) -> ComplexMatrix:
    """Complex matrix product ``a @ b``.

    ``mode="parallel"`` fans the output rows out over ``workers`` threads
    (default :func:`default_workers`). Results do not depend on the mode or
    the worker count.
    """
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    if mode not in MODES:
        raise ValueError(f"unknown execution mode {mode!r}; expected one of {MODES}")
    c_re = np.empty(a.rows * b.cols)
    c_im = np.empty(a.rows * b.cols)
    args = (a.re, a.im, b.re, b.im, c_re, c_im, a.cols, b.cols)
    if mode == "serial":
        _matmul_rows(*args, 0, a.rows)
    else:
        n = default_workers() if workers is None else workers
        if n < 1:
            raise ValueError(f"workers must be positive, got {n}")
        chunks = row_chunks(a.rows, n)
        if len(chunks) == 1:
            _matmul_rows(*args, 0, a.rows)
        else:
            pool = _pool(n)
            futures = [pool.submit(_matmul_rows, *args, lo, hi) for lo, hi in chunks]
            for f in futures:
                f.result()
    return ComplexMatrix(a.rows, b.cols, c_re, c_im)


def matvec(a: ComplexMatrix, v: ComplexVector) -> ComplexVector:
    if a.cols != v.len:
        raise ShapeError(f"cannot multiply {a.rows}x{a.cols} matrix by length-{v.len} vector")
    out_re = np.empty(a.rows)
    out_im = np.empty(a.rows)
    _matvec(a.re, a.im, v.re, v.im, out_re, out_im, a.rows, a.cols)
    return ComplexVector(a.rows, out_re, out_im)


def kronecker(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product; block (i, j) of the result is ``a[i, j] * b``."""
    ar = a.re.reshape(a.shape)
    ai = a.im.reshape(a.shape)
    br = b.re.reshape(b.shape)
    bi = b.im.reshape(b.shape)
    re = np.kron(ar, br) - np.kron(ai, bi)
    im = np.kron(ar, bi) + np.kron(ai, br)
    return ComplexMatrix(a.rows * b.rows, a.cols * b.cols, re, im)


def is_unitary(a: ComplexMatrix, tol: float = 1e-9) -> bool:
    """True iff every entry of ``a^dagger a - I`` has magnitude at most ``tol``."""
    if not a.is_square:
        raise ShapeError(f"unitarity needs a square matrix, got {a.rows}x{a.cols}")
    return matmul(a.adjoint(), a).max_abs_diff(identity(a.rows)) <= tol
