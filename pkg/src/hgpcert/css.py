"""Logical operators supported on qubit regions of a CSS code.

A CSS code here is anything exposing ``hx``, ``hz`` (X and Z check matrices
over the same ``N`` qubits). Phases play no role: a logical vector is trivial
exactly when it lies in the row space of the same-type checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Protocol

from .f2core import BitMatrix, bitstring, indicator, kernel, parse_bitstring, reduce_vector, support


class CssCode(Protocol):
    hx: BitMatrix
    hz: BitMatrix


@dataclass(frozen=True)
class QubitRegion:
    mask: int
    N: int

    def __post_init__(self) -> None:
        if self.mask < 0 or self.mask >> self.N:
            raise ValueError(f"region reaches outside {self.N} qubits")

    @classmethod
    def from_indices(cls, indices: Iterable[int], N: int) -> QubitRegion:
        idx = list(indices)
        for i in idx:
            if not 0 <= i < N:
                raise ValueError(f"qubit {i} out of range for N = {N}")
        return cls(indicator(idx), N)

    @property
    def indices(self) -> list[int]:
        return support(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __and__(self, other: QubitRegion) -> QubitRegion:
        return QubitRegion(self.mask & other.mask, self.N)

    def __or__(self, other: QubitRegion) -> QubitRegion:
        return QubitRegion(self.mask | other.mask, self.N)

    def grid_view(self, code) -> dict[str, list[int]]:
        """Touched vertical rows/columns and horizontal rows/columns."""
        view: dict[str, set[int]] = {"v_rows": set(), "v_cols": set(), "h_rows": set(), "h_cols": set()}
        for q in self.indices:
            block, a, b = code.locate(q)
            view[f"{block}_rows"].add(a)
            view[f"{block}_cols"].add(b)
        return {key: sorted(val) for key, val in view.items()}


def _as_region(region, N: int) -> QubitRegion:
    if isinstance(region, QubitRegion):
        if region.N != N:
            raise ValueError(f"region built for {region.N} qubits, code has {N}")
        return region
    if isinstance(region, int):
        return QubitRegion(region, N)
    return QubitRegion.from_indices(region, N)


def _checks(code: CssCode, pauli: str) -> tuple[BitMatrix, BitMatrix]:
    """(commutation checks, same-type stabilizers) for a logical of type ``pauli``."""
    if pauli == "Z":
        return code.hx, code.hz
    if pauli == "X":
        return code.hz, code.hx
    raise ValueError(f"pauli must be 'X' or 'Z', got {pauli!r}")


def _supported_kernel(code: CssCode, region: QubitRegion, pauli: str) -> list[int]:
    checks, _ = _checks(code, pauli)
    idx = region.indices
    local = kernel(checks.select_columns(idx)).T
    out = []
    for v in local.rows:
        out.append(indicator(idx[t] for t in support(v)))
    return out


def logicals_supported_on(code: CssCode, region, pauli: str) -> int | None:
    """A nontrivial ``pauli``-type logical supported inside ``region``, if any."""
    N = code.hx.ncols
    region = _as_region(region, N)
    _, stab = _checks(code, pauli)
    for v in _supported_kernel(code, region, pauli):
        if reduce_vector(stab, v):
            return v
    return None


def supported_logical_dimension(code: CssCode, region, pauli: str) -> int:
    """Dimension of the ``pauli``-type logicals on ``region`` modulo stabilizers."""
    region = _as_region(region, code.hx.ncols)
    _, stab = _checks(code, pauli)
    vecs = _supported_kernel(code, region, pauli)
    if not vecs:
        return 0
    return BitMatrix.from_rows(vecs, stab.ncols).vstack(stab).rank - stab.rank


def is_logical(code: CssCode, v: int, pauli: str) -> bool:
    checks, _ = _checks(code, pauli)
    return checks.apply(v) == 0


def is_trivial(code: CssCode, v: int, pauli: str) -> bool:
    _, stab = _checks(code, pauli)
    return reduce_vector(stab, v) == 0


@dataclass(frozen=True)
class CorrectabilityCertificate:
    region: QubitRegion
    verdict: str  # "correctable" | "not_correctable"
    witness: tuple[str, int] | None = None

    @property
    def correctable(self) -> bool:
        return self.verdict == "correctable"

    def to_dict(self) -> dict:
        out = {"region": self.region.indices, "verdict": self.verdict}
        if self.witness is not None:
            pauli, v = self.witness
            out["witness"] = {"type": pauli, "vector": bitstring(v, self.region.N)}
        return out

    @classmethod
    def from_dict(cls, data: dict, N: int) -> CorrectabilityCertificate:
        w = data.get("witness")
        witness = (w["type"], parse_bitstring(w["vector"])) if w else None
        return cls(QubitRegion.from_indices(data["region"], N), data["verdict"], witness)


def is_correctable(code: CssCode, region) -> CorrectabilityCertificate:
    region = _as_region(region, code.hx.ncols)
    for pauli in ("X", "Z"):
        v = logicals_supported_on(code, region, pauli)
        if v is not None:
            return CorrectabilityCertificate(region, "not_correctable", (pauli, v))
    return CorrectabilityCertificate(region, "correctable")


def verify_correctability(code: CssCode, cert: CorrectabilityCertificate) -> list[str]:
    """Re-check a certificate: witness validity, or absence by recomputation."""
    problems = []
    if cert.verdict == "not_correctable":
        if cert.witness is None:
            return ["not_correctable verdict without witness"]
        pauli, v = cert.witness
        if v & ~cert.region.mask:
            problems.append("witness leaves the region")
        if not is_logical(code, v, pauli):
            problems.append("witness violates a check")
        if is_trivial(code, v, pauli):
            problems.append("witness is a stabilizer")
    elif cert.verdict == "correctable":
        for pauli in ("X", "Z"):
            if logicals_supported_on(code, cert.region, pauli) is not None:
                problems.append(f"region supports a nontrivial {pauli} logical")
    else:
        problems.append(f"unknown verdict {cert.verdict!r}")
    return problems


def separation(code, alpha, beta) -> tuple[bool, bool]:
    """(horizontally separated, vertically separated) for vertical-block regions.

    Horizontal separation: every grid column ``[n_a] x {j}`` meets at most one
    region. Vertical separation: the same for every grid row ``{i} x [m_b]``.
    """
    alpha = _as_region(alpha, code.N)
    beta = _as_region(beta, code.N)
    for r in (alpha, beta):
        if r.mask & ~code.vertical_mask:
            raise ValueError("separation is defined for vertical-block regions only")
    a_rows, a_cols = _rows_cols(alpha, code.m_b)
    b_rows, b_cols = _rows_cols(beta, code.m_b)
    return not (a_cols & b_cols), not (a_rows & b_rows)


def _rows_cols(region: QubitRegion, m_b: int) -> tuple[set[int], set[int]]:
    rows, cols = set(), set()
    for q in region.indices:
        i, j = divmod(q, m_b)
        rows.add(i)
        cols.add(j)
    return rows, cols
