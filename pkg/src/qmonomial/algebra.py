"""Arithmetic in GF(2^d) and in the group algebra GF(2^d)[Z_2^k].

Field elements are plain ints whose bits are polynomial coefficients over
GF(2); addition is XOR.  A group-algebra element stores one field
coefficient per vector of Z_2^k, indexed by the vector's bit mask, so the
group product of two vectors is the XOR of their indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapError, ParameterError

MAX_FIELD_DEGREE = 32
MAX_ALGEBRA_DIM = 16
# dense-dense products above this dimension are legal but slow (4^k work)
PRACTICAL_ALGEBRA_DIM = 12

# Lexicographically smallest irreducible polynomial of each degree, as a
# (d+1)-bit mask.  d=1 uses x+1 so that the modulus has a constant term.
SMALLEST_IRREDUCIBLE = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
    9: 0b1000000011,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100000000100001,
    15: 0b1000000000000011,
    16: 0b10000000000101011,
    17: 0b100000000000001001,
    18: 0b1000000000000001001,
    19: 0b10000000000000100111,
    20: 0b100000000000000001001,
    21: 0b1000000000000000000101,
    22: 0b10000000000000000000011,
    23: 0b100000000000000000100001,
    24: 0b1000000000000000000011011,
    25: 0b10000000000000000000001001,
    26: 0b100000000000000000000011011,
    27: 0b1000000000000000000000100111,
    28: 0b10000000000000000000000000011,
    29: 0b100000000000000000000000000101,
    30: 0b1000000000000000000000000000011,
    31: 0b10000000000000000000000000001001,
    32: 0b100000000000000000000000010001101,
}

# log/exp tables are built up to this degree; larger fields use carry-less loops
_TABLE_MAX_DEGREE = 16
_ROW_CHUNK = 256


def poly_mod(a: int, m: int) -> int:
    """Remainder of a modulo m, both polynomials over GF(2) as bit masks."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(f: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(f)//2."""
    d = f.bit_length() - 1
    if d < 1:
        return False
    for g in range(2, 1 << (d // 2 + 1)):
        if poly_mod(f, g) == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldCtx:
    """The field GF(2^d) defined by an irreducible ``modulus`` of degree d."""

    d: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.d <= MAX_FIELD_DEGREE:
            raise ParameterError(f"field degree must be in [1, {MAX_FIELD_DEGREE}], got {self.d}")
        if self.modulus.bit_length() - 1 != self.d or not is_irreducible(self.modulus):
            raise ParameterError(f"modulus {self.modulus:#x} is not irreducible of degree {self.d}")

    @property
    def order(self) -> int:
        return 1 << self.d

    def element(self, value: int) -> int:
        if not 0 <= value < self.order:
            raise ParameterError(f"{value} is not an element of GF(2^{self.d})")
        return value

    # -- scalar arithmetic -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a >> self.d:
                a ^= self.modulus
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        """Multiplicative inverse as a^(2^d - 2)."""
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^d)")
        return self.pow(a, self.order - 2)

    # -- vectorised arithmetic ---------------------------------------------

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray] | None:
        if self.d > _TABLE_MAX_DEGREE:
            return None
        n = self.order - 1
        gen = 1
        if n > 1:
            factors = _prime_factors(n)
            gen = next(
                g for g in range(2, self.order)
                if all(self.pow(g, n // p) != 1 for p in factors)
            )
        exp = np.zeros(2 * n + 1, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.mul(x, gen)
        exp[n:2 * n] = exp[:n]
        return exp, log

    def mul_vec(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable integer arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        tables = self._tables
        if tables is not None:
            return self._mul_vec_table(a, b, tables)
        return self._mul_vec_clmul(a, b)

    def _mul_vec_table(self, a, b, tables) -> np.ndarray:
        exp, log = tables
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def _mul_vec_clmul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(a, b)
        r = np.zeros(a.shape, dtype=np.int64)
        for i in range(self.d):
            r ^= np.where((b >> i) & 1, a << i, 0)
        for bit in range(2 * self.d - 2, self.d - 1, -1):
            r ^= np.where((r >> bit) & 1, self.modulus << (bit - self.d), 0)
        return r


@lru_cache(maxsize=None)
def make_field(d: int) -> FieldCtx:
    """GF(2^d) with the tabulated smallest irreducible modulus."""
    if not isinstance(d, int) or not 1 <= d <= MAX_FIELD_DEGREE:
        raise ParameterError(f"field degree must be in [1, {MAX_FIELD_DEGREE}], got {d!r}")
    return FieldCtx(d, SMALLEST_IRREDUCIBLE[d])


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of vectors given as bit masks."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def span(vectors: Sequence[int]) -> set[int]:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def _check_dim(k: int) -> None:
    if not isinstance(k, int) or k < 0:
        raise ParameterError(f"algebra dimension must be a non-negative int, got {k!r}")
    if k > MAX_ALGEBRA_DIM:
        raise CapError(f"algebra dimension {k} exceeds hard cap {MAX_ALGEBRA_DIM}")


class AlgElem:
    """Element of GF(2^d)[Z_2^k] as a read-only array of 2^k coefficients."""

    __slots__ = ("field", "k", "coeffs")

    def __init__(self, field: FieldCtx, k: int, coeffs):
        _check_dim(k)
        arr = np.array(coeffs, dtype=np.int64)
        if arr.shape != (1 << k,):
            raise ParameterError(f"expected {1 << k} coefficients, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.order):
            raise ParameterError("coefficient outside the field")
        arr.flags.writeable = False
        self.field = field
        self.k = k
        self.coeffs = arr

    @classmethod
    def _wrap(cls, field: FieldCtx, k: int, arr: np.ndarray) -> AlgElem:
        # trusted constructor: arr already validated and owned
        obj = object.__new__(cls)
        arr.flags.writeable = False
        obj.field, obj.k, obj.coeffs = field, k, arr
        return obj

    @classmethod
    def zero(cls, field: FieldCtx, k: int) -> AlgElem:
        _check_dim(k)
        return cls._wrap(field, k, np.zeros(1 << k, dtype=np.int64))

    @classmethod
    def scalar(cls, field: FieldCtx, k: int, c: int) -> AlgElem:
        _check_dim(k)
        arr = np.zeros(1 << k, dtype=np.int64)
        arr[0] = field.element(c)
        return cls._wrap(field, k, arr)

    @classmethod
    def identity(cls, field: FieldCtx, k: int) -> AlgElem:
        return cls.scalar(field, k, 1)

    @classmethod
    def basis(cls, field: FieldCtx, k: int, v: int) -> AlgElem:
        _check_dim(k)
        if not 0 <= v < (1 << k):
            raise ParameterError(f"vector {v} is not in Z_2^{k}")
        arr = np.zeros(1 << k, dtype=np.int64)
        arr[v] = 1
        return cls._wrap(field, k, arr)

    @classmethod
    def shifted_basis(cls, field: FieldCtx, k: int, v: int) -> AlgElem:
        """basis(v) + identity, the substitution used for y-variables."""
        return alg_add(cls.basis(field, k, v), cls.identity(field, k))

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def nnz(self) -> int:
        return int(np.count_nonzero(self.coeffs))

    def support(self) -> list[int]:
        return np.flatnonzero(self.coeffs).tolist()

    def scale(self, c: int) -> AlgElem:
        return AlgElem._wrap(self.field, self.k, self.field.mul_vec(c, self.coeffs))

    def __add__(self, other: AlgElem) -> AlgElem:
        return alg_add(self, other)

    def __mul__(self, other: AlgElem) -> AlgElem:
        return alg_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgElem):
            return NotImplemented
        return (self.field == other.field and self.k == other.k
                and np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.field, self.k, self.coeffs.tobytes()))

    def render(self) -> str:
        """Canonical text: ``index:coeff-hex`` pairs in index order, zeros omitted."""
        pairs = (f"{i}:{int(self.coeffs[i]):x}" for i in np.flatnonzero(self.coeffs))
        return "[" + " ".join(pairs) + "]"

    def __repr__(self) -> str:
        return f"AlgElem(d={self.field.d}, k={self.k}, {self.render()})"


def _check_pair(u: AlgElem, w: AlgElem) -> None:
    if u.k != w.k or u.field != w.field:
        raise ParameterError(
            f"algebra mismatch: (d={u.field.d}, k={u.k}) vs (d={w.field.d}, k={w.k})")


def alg_add(u: AlgElem, w: AlgElem) -> AlgElem:
    _check_pair(u, w)
    return AlgElem._wrap(u.field, u.k, u.coeffs ^ w.coeffs)


def convolve_rows(field: FieldCtx, u: np.ndarray, rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    """XOR-convolution restricted to the given row indices of u.

    Passing every index gives the baseline 4^k product; passing only the
    nonzero indices of u gives the same result with less work.
    """
    idx = np.arange(w.shape[0], dtype=np.int64)
    out = np.zeros(w.shape[0], dtype=np.int64)
    for start in range(0, len(rows), _ROW_CHUNK):
        a = rows[start:start + _ROW_CHUNK]
        shifted = w[a[:, None] ^ idx[None, :]]
        prod = field.mul_vec(u[a][:, None], shifted)
        out ^= np.bitwise_xor.reduce(prod, axis=0)
    return out


def _mul_sparse(field: FieldCtx, u: np.ndarray, rows: np.ndarray, w: np.ndarray) -> np.ndarray:
    idx = np.arange(w.shape[0], dtype=np.int64)
    out = np.zeros(w.shape[0], dtype=np.int64)
    for a in rows.tolist():
        c = int(u[a])
        out ^= w[idx ^ a] if c == 1 else field.mul_vec(c, w[idx ^ a])
    return out


SPARSE_NNZ = 2


def alg_mul(u: AlgElem, w: AlgElem) -> AlgElem:
    _check_pair(u, w)
    ru, rw = np.flatnonzero(u.coeffs), np.flatnonzero(w.coeffs)
    if len(rw) < len(ru):
        u, w, ru = w, u, rw
    if len(ru) == 0:
        return AlgElem.zero(u.field, u.k)
    if len(ru) <= SPARSE_NNZ:
        out = _mul_sparse(u.field, u.coeffs, ru, w.coeffs)
    else:
        out = convolve_rows(u.field, u.coeffs, ru, w.coeffs)
    return AlgElem._wrap(u.field, u.k, out)


def alg_mul_baseline(u: AlgElem, w: AlgElem) -> AlgElem:
    """Dense convolution over all 2^k rows, no sparsity shortcuts."""
    _check_pair(u, w)
    rows = np.arange(1 << u.k, dtype=np.int64)
    return AlgElem._wrap(u.field, u.k, convolve_rows(u.field, u.coeffs, rows, w.coeffs))


def alg_span_product(vs: Sequence[int], field: FieldCtx, k: int) -> AlgElem:
    """Product of (basis(v) + identity) over vs, by repeated multiplication."""
    acc = AlgElem.identity(field, k)
    for v in vs:
        acc = alg_mul(acc, AlgElem.shifted_basis(field, k, v))
    return acc


def alg_span_product_closed(vs: Sequence[int], field: FieldCtx, k: int) -> AlgElem:
    """Closed form: zero when vs is dependent, else the indicator of span(vs)."""
    _check_dim(k)
    for v in vs:
        if not 0 <= v < (1 << k):
            raise ParameterError(f"vector {v} is not in Z_2^{k}")
    arr = np.zeros(1 << k, dtype=np.int64)
    if gf2_rank(vs) == len(vs):
        arr[sorted(span(vs))] = 1
    return AlgElem._wrap(field, k, arr)


@dataclass(frozen=True)
class GroupAlgebraRing:
    """Ring adapter so circuits can be evaluated over GF(2^d)[Z_2^k]."""

    field: FieldCtx
    k: int

    @cached_property
    def zero(self) -> AlgElem:
        return AlgElem.zero(self.field, self.k)

    @cached_property
    def one(self) -> AlgElem:
        return AlgElem.identity(self.field, self.k)

    def add(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return alg_add(a, b)

    def mul(self, a: AlgElem, b: AlgElem) -> AlgElem:
        return alg_mul(a, b)

    def is_zero(self, a: AlgElem) -> bool:
        return a.is_zero()
