"""Prime field arithmetic and dense linear algebra over F_p."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CharacteristicError, DimensionError

DEFAULT_PRIME = 31991

# Entries are kept below 2**31 so products fit in int64.
_MAX_PRIME = 2**31 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    # Deterministic Miller-Rabin for n < 3.3e24 with these bases.
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def _checked_prime(p: int) -> int:
    if not is_prime(p):
        raise CharacteristicError(f"{p} is not prime")
    if p > _MAX_PRIME:
        raise CharacteristicError(f"prime {p} exceeds the supported bound {_MAX_PRIME}")
    return p


@dataclass(frozen=True)
class PrimeField:
    """The field F_p. Primality is checked once, at construction."""

    p: int = DEFAULT_PRIME

    def __post_init__(self):
        _checked_prime(self.p)

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return pow(a, -1, self.p)

    def reduce(self, a: int) -> int:
        return a % self.p

    def __str__(self) -> str:
        return f"F_{self.p}"


def default_field() -> PrimeField:
    """Field for the default prime, honouring the ``ACMCURVE_PRIME`` override."""
    return PrimeField(int(os.environ.get("ACMCURVE_PRIME", DEFAULT_PRIME)))


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: PrimeField

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise ValueError(f"{self.value} is not reduced modulo {self.field.p}")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise DimensionError("elements of different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other)
        return NotImplemented

    def _make(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.p, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._make(-self.value)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._make(self.value * self.field.inv(o))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._make(pow(self.value, n, self.field.p))

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


class Matrix:
    """Immutable dense matrix over F_p, stored row-major as an int64 array."""

    __slots__ = ("field", "_data")

    def __init__(self, entries, field: PrimeField | None = None, shape: tuple[int, int] | None = None):
        self.field = field or default_field()
        if isinstance(entries, (list, tuple)) and entries and isinstance(entries[0], (list, tuple)):
            if len({len(r) for r in entries}) != 1:
                raise DimensionError("matrix rows have different lengths")
        data = np.array(entries, dtype=object if _needs_object(entries) else np.int64)
        if shape is not None:
            data = data.reshape(shape)
        if data.ndim == 1 and shape is None:
            data = data.reshape(1, -1) if data.size else data.reshape(0, 0)
        if data.ndim != 2:
            raise DimensionError("matrix entries must form a 2-d grid")
        data = np.asarray(np.mod(data, self.field.p), dtype=np.int64)
        data.setflags(write=False)
        self._data = data

    @classmethod
    def _wrap(cls, data: np.ndarray, field: PrimeField) -> "Matrix":
        m = cls.__new__(cls)
        m.field = field
        data = np.ascontiguousarray(data, dtype=np.int64)
        data.setflags(write=False)
        m._data = data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField | None = None) -> "Matrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), field or default_field())

    @classmethod
    def identity(cls, n: int, field: PrimeField | None = None) -> "Matrix":
        return cls._wrap(np.eye(n, dtype=np.int64), field or default_field())

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def entries(self) -> list[int]:
        return [int(x) for x in self._data.ravel()]

    def to_numpy(self) -> np.ndarray:
        return self._data.copy()

    def __getitem__(self, idx):
        out = self._data[idx]
        return int(out) if np.ndim(out) == 0 else out

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self._data.T, self.field)

    def __matmul__(self, other):
        p = self.field.p
        if isinstance(other, Matrix):
            if other.field != self.field or self.cols != other.rows:
                raise DimensionError("incompatible matrices")
            return Matrix._wrap(_matmul_mod(self._data, other._data, p), self.field)
        vec = np.asarray(other, dtype=np.int64) % p
        if vec.shape[0] != self.cols:
            raise DimensionError("vector length does not match column count")
        return _matmul_mod(self._data, vec.reshape(self.cols, -1), p).reshape(
            (self.rows,) + vec.shape[1:]
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self.field, self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix({self.rows}x{self.cols} over {self.field})"


def _needs_object(entries) -> bool:
    try:
        arr = np.asarray(entries)
    except (ValueError, OverflowError):
        return True
    return arr.dtype == object


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # Chunk the inner dimension so int64 accumulation cannot overflow.
    chunk = max(1, (2**62) // ((p - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], chunk):
        out = (out + a[:, s:s + chunk] @ b[s:s + chunk]) % p
    return out


def mat_rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = m.to_numpy()
    if a.size == 0:
        return Matrix._wrap(a, m.field), []
    pivots = _kernels.rref_inplace(a, m.field.p)
    return Matrix._wrap(a, m.field), [int(c) for c in pivots]


def mat_rank(m: Matrix) -> int:
    return rank_mod_p(m._data, m.field.p)


def rank_mod_p(a: np.ndarray, p: int) -> int:
    """Rank of an int64 array of residues; works on a copy."""
    if a.size == 0:
        return 0
    a = np.array(a, dtype=np.int64)
    if a.shape[0] > a.shape[1]:
        a = np.ascontiguousarray(a.T)
    return int(_kernels.echelon_rank(a, p))


def mat_kernel(m: Matrix) -> list[list[int]]:
    """Canonical basis of the right kernel {v : Mv = 0}.

    One vector per free column of the RREF, with a 1 in that column.
    """
    r, pivots = mat_rref(m)
    p = m.field.p
    a = r._data
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [0] * m.cols
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = int(-a[row, free] % p)
        basis.append(v)
    return basis


def row_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Nonzero rows of the RREF of ``a`` (the canonical row-space basis)."""
    a = np.array(a, dtype=np.int64)
    if a.size == 0:
        return a.reshape(0, a.shape[1] if a.ndim == 2 else 0)
    pivots = _kernels.rref_inplace(a, p)
    return a[: len(pivots)]


def kernel_array(a: np.ndarray, p: int) -> np.ndarray:
    """Kernel basis as the rows of an int64 array (same convention as mat_kernel)."""
    basis = mat_kernel(Matrix._wrap(np.asarray(a, dtype=np.int64), PrimeField(p)))
    return np.array(basis, dtype=np.int64).reshape(len(basis), a.shape[1])


class FieldSampler:
    """Uniform F_p samples from a PCG64 stream.

    Draws raw 64-bit words and rejects the top partial block, so the value
    stream depends only on PCG64 and the seed, not on numpy's distribution
    code. ``spawn`` derives independent child streams.
    """

    def __init__(self, seed: int | np.random.SeedSequence, p: int):
        self.seed_seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self.p = p
        self._bits = np.random.PCG64(self.seed_seq)
        self._limit = (2**64 // p) * p

    def element(self) -> int:
        while True:
            x = int(self._bits.random_raw())
            if x < self._limit:
                return x % self.p

    def nonzero(self) -> int:
        while True:
            x = self.element()
            if x:
                return x

    def elements(self, n: int) -> list[int]:
        return [self.element() for _ in range(n)]

    def spawn(self, n: int) -> list["FieldSampler"]:
        return [FieldSampler(s, self.p) for s in self.seed_seq.spawn(n)]

    def child(self, *key: int) -> "FieldSampler":
        """Deterministic child stream addressed by an integer key path."""
        entropy = self.seed_seq.entropy
        path = tuple(self.seed_seq.spawn_key) + tuple(key)
        return FieldSampler(np.random.SeedSequence(entropy, spawn_key=path), self.p)


def as_residues(values: Iterable[int], p: int) -> np.ndarray:
    return np.array([int(v) % p for v in values], dtype=np.int64)


def is_zero_vector(v: Sequence[int]) -> bool:
    return not any(v)
