"""Hypergraph product codes, their logical bases and taut operators.

Qubits are flattened vertical block first. Vertical qubit ``(i, j)`` with
``i < n_a`` and ``j < m_b`` sits at ``i * m_b + j``; horizontal qubit
``(p, q)`` with ``p < m_a`` and ``q < n_b`` sits at ``n_a * m_b + p * n_b + q``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from . import alist
from .codes import ClassicalCode, find_puncture
from .f2core import BitMatrix, cokernel, kernel, kron, rowspace_elements, rowspace_member, support

FLATTENING = "vertical-first-row-major"
DEFAULT_TAUT_BUDGET = 1 << 16


class ConsistencyError(AssertionError):
    """An internal identity failed; this is a bug, not bad input."""


@dataclass(frozen=True)
class HgpCode:
    A: ClassicalCode
    B: ClassicalCode
    hx: BitMatrix
    hz: BitMatrix

    # -- sizes ---------------------------------------------------------------

    @property
    def n_a(self) -> int:
        return self.A.n

    @property
    def m_a(self) -> int:
        return self.A.m

    @property
    def n_b(self) -> int:
        return self.B.n

    @property
    def m_b(self) -> int:
        return self.B.m

    @property
    def n_vertical(self) -> int:
        return self.n_a * self.m_b

    @property
    def n_horizontal(self) -> int:
        return self.m_a * self.n_b

    @property
    def N(self) -> int:
        return self.n_vertical + self.n_horizontal

    @cached_property
    def k(self) -> int:
        return self.N - self.hx.rank - self.hz.rank

    @property
    def vertical_mask(self) -> int:
        return (1 << self.n_vertical) - 1

    # -- grid ----------------------------------------------------------------

    def vertical_index(self, i: int, j: int) -> int:
        if not (0 <= i < self.n_a and 0 <= j < self.m_b):
            raise IndexError((i, j))
        return i * self.m_b + j

    def horizontal_index(self, p: int, q: int) -> int:
        if not (0 <= p < self.m_a and 0 <= q < self.n_b):
            raise IndexError((p, q))
        return self.n_vertical + p * self.n_b + q

    def locate(self, index: int) -> tuple[str, int, int]:
        """Inverse of the flattening: ``("v", i, j)`` or ``("h", p, q)``."""
        if not 0 <= index < self.N:
            raise IndexError(index)
        if index < self.n_vertical:
            return ("v", *divmod(index, self.m_b))
        return ("h", *divmod(index - self.n_vertical, self.n_b))

    def grid_region(self, rows: Iterable[int], cols: Iterable[int]) -> int:
        """Mask of the vertical qubits ``rows x cols``."""
        cols = list(cols)
        mask = 0
        for i in rows:
            for j in cols:
                mask |= 1 << self.vertical_index(i, j)
        return mask

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "n_a": self.n_a,
            "m_a": self.m_a,
            "n_b": self.n_b,
            "m_b": self.m_b,
            "H_a": alist.dumps(self.A.H),
            "H_b": alist.dumps(self.B.H),
            "flattening": FLATTENING,
        }

    @classmethod
    def from_dict(cls, data: dict) -> HgpCode:
        if data.get("flattening", FLATTENING) != FLATTENING:
            raise ValueError(f"unsupported flattening {data['flattening']!r}")
        code = product(ClassicalCode(alist.loads(data["H_a"])), ClassicalCode(alist.loads(data["H_b"])))
        dims = (code.n_a, code.m_a, code.n_b, code.m_b)
        if dims != (data["n_a"], data["m_a"], data["n_b"], data["m_b"]):
            raise ValueError("declared dimensions disagree with the embedded matrices")
        return code


def product(A: ClassicalCode, B: ClassicalCode) -> HgpCode:
    da, db = A.H, B.H
    ma, na, mb, nb = da.nrows, da.ncols, db.nrows, db.ncols
    hx = kron(da, BitMatrix.identity(mb)).hstack(kron(BitMatrix.identity(ma), db))
    hz = kron(BitMatrix.identity(na), db.T).hstack(kron(da.T, BitMatrix.identity(nb)))
    if not (hx @ hz.T).is_zero():
        raise ConsistencyError("H_X H_Z^T != 0")
    return HgpCode(A, B, hx, hz)


def logical_qubit_count(code: HgpCode) -> int:
    A, B = code.A, code.B
    expected = A.k * B.k_T + A.k_T * B.k
    if code.k != expected:
        raise ConsistencyError(f"rank count k = {code.k} but k_a k_b^T + k_a^T k_b = {expected}")
    return code.k


def sector(code: HgpCode) -> str:
    vertical = code.A.k * code.B.k_T
    horizontal = code.A.k_T * code.B.k
    if vertical and horizontal:
        return "both_sectors"
    if vertical:
        return "vertical_restricted"
    if horizontal:
        return "horizontal_restricted"
    return "trivial"


def is_vertical_sector(code: HgpCode) -> bool:
    """True when ``k_a^T k_b = 0``, which includes the ``k = 0`` case."""
    return code.A.k_T * code.B.k == 0


# -- logical bases -----------------------------------------------------------


@dataclass(frozen=True)
class LogicalBasis:
    lz: BitMatrix
    lx: BitMatrix
    punctures: dict[str, tuple[int, ...]]

    def to_dict(self) -> dict:
        return {
            "Lz": self.lz.to_literal().splitlines(),
            "Lx": self.lx.to_literal().splitlines(),
            "punctures": {key: list(val) for key, val in self.punctures.items()},
        }


def _selection(indices: tuple[int, ...], n: int) -> BitMatrix:
    return BitMatrix.from_rows([1 << i for i in indices], n)


def logical_basis(code: HgpCode) -> LogicalBasis:
    """Taut Z and X logical representatives built from punctures of the factors."""
    A, B = code.A, code.B
    da, db = A.H, B.H
    shift = code.n_vertical

    def pick(M: BitMatrix, e: int, label: str) -> tuple[int, ...]:
        p = find_puncture(M, e, target=label)
        if p is None:
            raise ConsistencyError(f"no {e}-puncture for {label}")
        return p.indices

    g_zv = pick(db.T, B.k_T, "d_b^T")
    g_zh = pick(da.T, A.k_T, "d_a^T")
    g_xv = pick(da, A.k, "d_a")
    g_xh = pick(db, B.k, "d_b")

    ker_a, ker_b = kernel(da).T, kernel(db).T
    coker_a, coker_b = cokernel(da), cokernel(db)

    lz_rows = list(kron(ker_a, _selection(g_zv, code.m_b)).rows)
    lz_rows += [r << shift for r in kron(_selection(g_zh, code.m_a), ker_b).rows]
    lx_rows = list(kron(_selection(g_xv, code.n_a), coker_b).rows)
    lx_rows += [r << shift for r in kron(coker_a, _selection(g_xh, code.n_b)).rows]
    lz = BitMatrix.from_rows(lz_rows, code.N)
    lx = BitMatrix.from_rows(lx_rows, code.N)

    basis = LogicalBasis(lz, lx, {"gamma_Zv": g_zv, "gamma_Zh": g_zh, "gamma_Xv": g_xv, "gamma_Xh": g_xh})
    _check_basis(code, basis)
    return basis


def _check_basis(code: HgpCode, basis: LogicalBasis) -> None:
    k = logical_qubit_count(code)
    lz, lx = basis.lz, basis.lx
    if lz.nrows != k or lx.nrows != k:
        raise ConsistencyError(f"basis sizes {lz.nrows}, {lx.nrows} != k = {k}")
    if not (code.hx @ lz.T).is_zero():
        raise ConsistencyError("Z logical violates an X check")
    if not (code.hz @ lx.T).is_zero():
        raise ConsistencyError("X logical violates a Z check")
    if lz.vstack(code.hz).rank != code.hz.rank + k:
        raise ConsistencyError("Z logicals are dependent modulo stabilizers")
    if lx.vstack(code.hx).rank != code.hx.rank + k:
        raise ConsistencyError("X logicals are dependent modulo stabilizers")
    if (lx @ lz.T).rank != k:
        raise ConsistencyError("X/Z logical pairing is degenerate")


# -- taut operators ------------------------------------------------------------


@dataclass(frozen=True)
class TautOperator:
    kind: str  # "Z-vertical" | "X-vertical" | "Z-horizontal" | "X-horizontal"
    line: int
    profile: int
    vector: int

    @property
    def pauli(self) -> str:
        return self.kind[0]

    @property
    def support(self) -> list[int]:
        return support(self.vector)


class TautBudgetExceeded(RuntimeError):
    def __init__(self, partial: list[TautOperator], budget: int):
        super().__init__(f"taut enumeration truncated at {budget} profiles per family")
        self.partial = partial
        self.budget = budget


def _spread(profile: int, stride: int, offset: int) -> int:
    """Place bit ``t`` of ``profile`` at position ``offset + t * stride``."""
    v = 0
    for t in support(profile):
        v |= 1 << (offset + t * stride)
    return v


def _taut_vector(code: HgpCode, kind: str, line: int, profile: int) -> int:
    if kind == "Z-vertical":
        return _spread(profile, code.m_b, line)
    if kind == "X-vertical":
        return profile << (line * code.m_b)
    if kind == "Z-horizontal":
        return profile << (code.n_vertical + line * code.n_b)
    if kind == "X-horizontal":
        return _spread(profile, code.n_b, code.n_vertical + line)
    raise ValueError(kind)


def taut_operators(code: HgpCode, budget: int = DEFAULT_TAUT_BUDGET) -> list[TautOperator]:
    """All taut operators, grouped by family, profiles in Gray-code order.

    Raises :class:`TautBudgetExceeded` (carrying the partial list) if some
    family has more than ``budget`` nonzero profiles.
    """
    da, db = code.A.H, code.B.H
    families = [
        ("Z-vertical", kernel(da).T, code.m_b),
        ("X-vertical", cokernel(db), code.n_a),
        ("Z-horizontal", kernel(db).T, code.m_a),
        ("X-horizontal", cokernel(da), code.n_b),
    ]
    out: list[TautOperator] = []
    truncated = False
    for kind, span, lines in families:
        if (1 << span.rank) - 1 > budget:
            truncated = True
        profiles = list(rowspace_elements(span, budget))
        for line in range(lines):
            for prof in profiles:
                out.append(TautOperator(kind, line, prof, _taut_vector(code, kind, line, prof)))
    if truncated:
        raise TautBudgetExceeded(out, budget)
    return out


class DecompositionError(ValueError):
    pass


def decompose_taut(code: HgpCode, v: int, pauli: str, allow_horizontal: bool = False) -> list[TautOperator]:
    """Split a vertical logical into disjoint taut operators of the same type.

    The pieces sum to ``v`` modulo the stabilizers of the same type
    (``H_Z`` rows for ``pauli="Z"``, ``H_X`` rows for ``"X"``). With
    ``allow_horizontal`` a logical touching horizontal qubits is accepted
    and cleaned onto the vertical block.
    """
    if not is_vertical_sector(code):
        raise DecompositionError(f"code is not restricted to the vertical sector ({sector(code)})")
    if v < 0 or v >> code.N:
        raise DecompositionError("vector does not fit the code")
    if v & ~code.vertical_mask and not allow_horizontal:
        raise DecompositionError("support touches horizontal qubits")

    if pauli == "Z":
        if code.hx.apply(v):
            raise DecompositionError("not a Z-type logical: violates an X check")
        span = kernel(code.A.H).T
        lines = code.m_b
        gens = kron(span, BitMatrix.identity(lines))
        stab = code.hz
        kind = "Z-vertical"
    elif pauli == "X":
        if code.hz.apply(v):
            raise DecompositionError("not an X-type logical: violates a Z check")
        span = cokernel(code.B.H)
        lines = code.n_a
        gens = kron(BitMatrix.identity(lines), span)
        stab = code.hx
        kind = "X-vertical"
    else:
        raise ValueError(f"pauli must be 'X' or 'Z', got {pauli!r}")

    padded = BitMatrix(gens.nrows, code.N, gens.rows)
    ok, coeff = rowspace_member(padded.vstack(stab), v)
    if not ok:
        raise DecompositionError("vector is not a sum of taut operators modulo stabilizers")

    dim = span.nrows
    pieces = []
    for line in range(lines):
        prof = 0
        for t in range(dim):
            idx = t * lines + line if pauli == "Z" else line * dim + t
            if (coeff >> idx) & 1:
                prof ^= span.rows[t]
        if prof:
            pieces.append(TautOperator(kind, line, prof, _taut_vector(code, kind, line, prof)))
    return pieces
