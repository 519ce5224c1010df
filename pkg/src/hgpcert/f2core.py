"""Exact linear algebra over GF(2).

Rows are stored as Python ints used as bitsets: bit ``c`` of a row is the
entry in column ``c``. Row operations are whole-row XORs, which CPython
executes word-wise on the underlying digit array.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


def _mask(n: int) -> int:
    return (1 << n) - 1


def bits_to_int(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int, first element at bit 0."""
    value = 0
    for c, b in enumerate(bits):
        if b & 1:
            value |= 1 << c
    return value


def int_to_bits(value: int, n: int) -> list[int]:
    return [(value >> c) & 1 for c in range(n)]


def support(value: int) -> list[int]:
    """Sorted indices of the set bits of ``value``."""
    out = []
    c = 0
    while value:
        if value & 1:
            out.append(c)
        value >>= 1
        c += 1
    return out


def weight(value: int) -> int:
    return value.bit_count()


def indicator(indices: Iterable[int]) -> int:
    value = 0
    for i in indices:
        value |= 1 << i
    return value


def bitstring(value: int, n: int) -> str:
    return "".join("1" if (value >> c) & 1 else "0" for c in range(n))


def parse_bitstring(text: str) -> int:
    text = text.strip()
    if any(ch not in "01." for ch in text):
        raise ValueError(f"not a bit string: {text!r}")
    return bits_to_int(1 if ch == "1" else 0 for ch in text)


@dataclass(frozen=True)
class BitMatrix:
    """Immutable dense matrix over GF(2) with int-packed rows."""

    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.nrows < 0 or self.ncols < 0:
            raise ValueError("dimensions must be non-negative")
        if len(self.rows) != self.nrows:
            raise ValueError(f"expected {self.nrows} rows, got {len(self.rows)}")
        limit = 1 << self.ncols
        for r in self.rows:
            if r < 0 or r >= limit:
                raise ValueError("row has bits outside the column range")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[int], ncols: int) -> BitMatrix:
        return cls(len(rows), ncols, tuple(int(r) for r in rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        a = np.asarray(array, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        nrows, ncols = a.shape
        return cls(nrows, ncols, tuple(bits_to_int(row & 1) for row in a))

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]], ncols: int | None = None) -> BitMatrix:
        if ncols is None:
            if not lists:
                raise ValueError("ncols required for an empty row list")
            ncols = len(lists[0])
        for row in lists:
            if len(row) != ncols:
                raise ValueError("ragged rows")
        return cls(len(lists), ncols, tuple(bits_to_int(row) for row in lists))

    @classmethod
    def parse(cls, text: str, ncols: int | None = None) -> BitMatrix:
        """Parse one row per line of ``0``/``1``/``.`` characters (dot is zero).

        Blank lines are ignored. ``ncols`` is needed only when there are no rows.
        """
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            if ncols is None:
                raise ValueError("ncols required for an empty literal")
            return cls.zeros(0, ncols)
        width = len(lines[0])
        if ncols is not None and ncols != width:
            raise ValueError("literal width disagrees with ncols")
        for ln in lines:
            if len(ln) != width:
                raise ValueError("ragged literal")
        return cls(len(lines), width, tuple(parse_bitstring(ln) for ln in lines))

    # -- views --------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def to_array(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.uint8)
        for i, r in enumerate(self.rows):
            for c in support(r):
                out[i, c] = 1
        return out

    def to_literal(self, zero: str = "0") -> str:
        return "\n".join(bitstring(r, self.ncols).replace("0", zero) for r in self.rows)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(key)
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.rows[i]

    def column(self, j: int) -> int:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return bits_to_int((r >> j) & 1 for r in self.rows)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __str__(self) -> str:
        return self.to_literal(".")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return BitMatrix(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for j in support(r):
                acc ^= other.rows[j]
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, tuple(out))

    def apply(self, vector: int) -> int:
        """Return ``M v`` for a column vector ``v`` packed as an int."""
        if vector >> self.ncols:
            raise ValueError("vector longer than column count")
        return bits_to_int((r & vector).bit_count() & 1 for r in self.rows)

    @cached_property
    def T(self) -> BitMatrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            bit = 1 << i
            for c in support(r):
                cols[c] |= bit
        return BitMatrix(self.ncols, self.nrows, tuple(cols))

    def transpose(self) -> BitMatrix:
        return self.T

    def hstack(self, other: BitMatrix) -> BitMatrix:
        if self.nrows != other.nrows:
            raise ValueError("hstack needs equal row counts")
        shift = self.ncols
        return BitMatrix(
            self.nrows, self.ncols + other.ncols, tuple(a | (b << shift) for a, b in zip(self.rows, other.rows))
        )

    def vstack(self, other: BitMatrix) -> BitMatrix:
        if self.ncols != other.ncols:
            raise ValueError("vstack needs equal column counts")
        return BitMatrix(self.nrows + other.nrows, self.ncols, self.rows + other.rows)

    def select_rows(self, indices: Sequence[int]) -> BitMatrix:
        for i in indices:
            if not 0 <= i < self.nrows:
                raise IndexError(f"row index {i} out of range")
        return BitMatrix(len(indices), self.ncols, tuple(self.rows[i] for i in indices))

    def select_columns(self, indices: Sequence[int]) -> BitMatrix:
        for j in indices:
            if not 0 <= j < self.ncols:
                raise IndexError(f"column index {j} out of range")
        out = []
        for r in self.rows:
            v = 0
            for t, j in enumerate(indices):
                if (r >> j) & 1:
                    v |= 1 << t
            out.append(v)
        return BitMatrix(self.nrows, len(indices), tuple(out))

    def delete_columns(self, indices: Iterable[int]) -> BitMatrix:
        drop = set(indices)
        for j in drop:
            if not 0 <= j < self.ncols:
                raise IndexError(f"column index {j} out of range")
        return self.select_columns([j for j in range(self.ncols) if j not in drop])

    # -- cached reductions --------------------------------------------------

    @cached_property
    def rref(self) -> RowReducedForm:
        return row_reduce(self)

    @property
    def rank(self) -> int:
        return self.rref.rank


@dataclass(frozen=True)
class RowReducedForm:
    matrix: BitMatrix
    pivot_cols: tuple[int, ...]
    # transform @ source == matrix; lets callers recover row combinations
    transform: BitMatrix = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def free_cols(self) -> tuple[int, ...]:
        pivots = set(self.pivot_cols)
        return tuple(c for c in range(self.matrix.ncols) if c not in pivots)


def row_reduce(M: BitMatrix) -> RowReducedForm:
    """Reduced row-echelon form, pivots chosen left to right.

    Within a column the lowest-index candidate row becomes the pivot row. Zero
    rows are left at the bottom.
    """
    rows = list(M.rows)
    combo = [1 << i for i in range(M.nrows)]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        if r == len(rows):
            break
        bit = 1 << c
        p = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        combo[r], combo[p] = combo[p], combo[r]
        pr, pc = rows[r], combo[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
                combo[i] ^= pc
        pivots.append(c)
        r += 1
    return RowReducedForm(
        BitMatrix(M.nrows, M.ncols, tuple(rows)),
        tuple(pivots),
        BitMatrix(M.nrows, M.nrows, tuple(combo)),
    )


def rank(M: BitMatrix) -> int:
    return M.rank


def kernel(M: BitMatrix) -> BitMatrix:
    """Columns form a basis of the null space of ``M``.

    One basis vector per free column, in ascending order; each has a single 1
    among the free positions, so the free rows of the result form an identity.
    """
    red = M.rref
    reduced = red.matrix.rows
    vectors = []
    for f in red.free_cols:
        v = 1 << f
        for i, p in enumerate(red.pivot_cols):
            if (reduced[i] >> f) & 1:
                v |= 1 << p
        vectors.append(v)
    return BitMatrix(len(vectors), M.ncols, tuple(vectors)).T


def cokernel(M: BitMatrix) -> BitMatrix:
    """Rows span the left null space of ``M``: ``cokernel(M) @ M == 0``."""
    return kernel(M.T).T


def kron(A: BitMatrix, B: BitMatrix) -> BitMatrix:
    """Kronecker product; the row/column index of A is the outer one."""
    out = []
    for a in A.rows:
        a_cols = support(a)
        for b in B.rows:
            v = 0
            for c in a_cols:
                v |= b << (c * B.ncols)
            out.append(v)
    return BitMatrix(A.nrows * B.nrows, A.ncols * B.ncols, tuple(out))


def rowspace_member(M: BitMatrix, v: int | Sequence[int]) -> tuple[bool, int | None]:
    """Decide whether ``v`` is a sum of rows of ``M``.

    Returns ``(True, witness)`` where bit ``i`` of ``witness`` says whether row
    ``i`` of ``M`` enters the sum, or ``(False, None)``.
    """
    if not isinstance(v, int):
        v = list(v)
        if len(v) != M.ncols:
            raise ValueError(f"vector length {len(v)} != {M.ncols} columns")
        v = bits_to_int(v)
    elif v < 0 or v >> M.ncols:
        raise ValueError("vector length exceeds column count")
    red = M.rref
    residual = v
    coeff = 0
    for i, p in enumerate(red.pivot_cols):
        if (residual >> p) & 1:
            residual ^= red.matrix.rows[i]
            coeff ^= red.transform.rows[i]
    if residual:
        return False, None
    return True, coeff


def in_rowspace(M: BitMatrix, v: int) -> bool:
    return rowspace_member(M, v)[0]


def reduce_vector(M: BitMatrix, v: int) -> int:
    """Residue of ``v`` after clearing the pivot positions of ``M``'s RREF."""
    red = M.rref
    for i, p in enumerate(red.pivot_cols):
        if (v >> p) & 1:
            v ^= red.matrix.rows[i]
    return v


def rowspace_elements(M: BitMatrix, limit: int | None = None) -> Iterable[int]:
    """Yield the nonzero elements of the row space in Gray-code order."""
    basis = [r for r in M.rref.matrix.rows if r]
    count = (1 << len(basis)) - 1
    if limit is not None:
        count = min(count, limit)
    v = 0
    for t in range(1, count + 1):
        v ^= basis[(t & -t).bit_length() - 1]
        yield v


def arithmetic(op: str, A: BitMatrix, B: BitMatrix | None = None, indices: Sequence[int] | None = None) -> BitMatrix:
    """Dispatch table for the elementary matrix operations."""
    if op == "add":
        return A + B
    if op == "multiply":
        return A @ B
    if op == "transpose":
        return A.T
    if op == "hstack":
        return A.hstack(B)
    if op == "vstack":
        return A.vstack(B)
    if op == "select_columns":
        return A.select_columns(indices)
    if op == "select_rows":
        return A.select_rows(indices)
    raise ValueError(f"unknown op {op!r}")
