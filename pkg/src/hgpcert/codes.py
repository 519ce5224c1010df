"""Classical codes as parity-check maps: punctures, canonical form, robustness."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .f2core import BitMatrix, cokernel, indicator, kernel, support

DEFAULT_SEARCH_CAP = 1 << 20
DEFAULT_DISTANCE_LIMIT = 1 << 20


class SearchLimitExceeded(RuntimeError):
    """A subset search would exceed its combination cap."""

    def __init__(self, n: int, e: int, cap: int):
        super().__init__(f"C({n}, {e}) = {math.comb(n, e)} subsets exceeds the search cap {cap}")
        self.n, self.e, self.cap = n, e, cap


@dataclass(frozen=True)
class ClassicalCode:
    """Code given by a parity check ``H`` (m x n), possibly with redundant rows."""

    H: BitMatrix
    name: str | None = None

    @classmethod
    def from_parity_check(cls, H: BitMatrix, name: str | None = None) -> ClassicalCode:
        return cls(H, name)

    @property
    def n(self) -> int:
        return self.H.ncols

    @property
    def m(self) -> int:
        return self.H.nrows

    @property
    def rank(self) -> int:
        return self.H.rank

    @property
    def k(self) -> int:
        return self.n - self.rank

    @property
    def k_T(self) -> int:
        return self.m - self.rank

    @cached_property
    def G(self) -> BitMatrix:
        return kernel(self.H).T

    @cached_property
    def H_full(self) -> BitMatrix:
        """Independent rows spanning the same space as ``H``."""
        red = self.H.rref
        return BitMatrix.from_rows(red.matrix.rows[: red.rank], self.n)

    def transpose(self) -> ClassicalCode:
        name = f"{self.name}^T" if self.name else None
        return ClassicalCode(self.H.T, name)

    def __str__(self) -> str:
        label = self.name or "code"
        return f"{label}[n={self.n}, m={self.m}, k={self.k}, k_T={self.k_T}]"


def from_parity_check(H: BitMatrix, name: str | None = None) -> ClassicalCode:
    return ClassicalCode(H, name)


def repetition_code(n: int) -> ClassicalCode:
    """Open-chain repetition code with ``n - 1`` adjacent-pair checks."""
    rows = [(1 << i) | (1 << (i + 1)) for i in range(n - 1)]
    return ClassicalCode(BitMatrix.from_rows(rows, n), f"rep{n}")


def cycle_code(n: int) -> ClassicalCode:
    """Closed-chain repetition code: ``n`` checks on a cycle of length ``n``."""
    rows = [(1 << i) | (1 << ((i + 1) % n)) for i in range(n)]
    return ClassicalCode(BitMatrix.from_rows(rows, n), f"cycle{n}")


def hamming_code(r: int = 3) -> ClassicalCode:
    n = (1 << r) - 1
    cols = list(range(1, n + 1))
    rows = [indicator(j for j, c in enumerate(cols) if (c >> i) & 1) for i in range(r)]
    return ClassicalCode(BitMatrix.from_rows(rows, n), f"hamming{n}")


# -- punctures --------------------------------------------------------------


@dataclass(frozen=True)
class Puncture:
    indices: tuple[int, ...]
    target: str = ""

    @property
    def size(self) -> int:
        return len(self.indices)


def _check_indices(M: BitMatrix, gamma: Iterable[int]) -> list[int]:
    idx = list(gamma)
    if len(set(idx)) != len(idx):
        raise ValueError("puncture indices must be distinct")
    for j in idx:
        if not 0 <= j < M.ncols:
            raise IndexError(f"puncture index {j} out of range for {M.ncols} columns")
    return idx


def is_puncture(M: BitMatrix, gamma: Iterable[int]) -> bool:
    """True when deleting the ``gamma`` columns leaves the rank unchanged."""
    idx = _check_indices(M, gamma)
    if not idx:
        return True
    return M.delete_columns(idx).rank == M.rank


def _puncture_mask_test(M: BitMatrix):
    """Fast mask-level puncture predicate for repeated subset queries.

    ``gamma`` punctures ``M`` iff the columns ``gamma`` of a basis ``N`` of the
    annihilator of rowspace(M) are independent: a row-space vector supported
    on ``gamma`` is exactly a dependency among those columns.
    """
    N = kernel(M).T
    cols = [N.column(j) for j in range(M.ncols)]

    def test(mask: int) -> bool:
        basis: dict[int, int] = {}
        for j in support(mask):
            v = cols[j]
            while v:
                top = v.bit_length() - 1
                if top in basis:
                    v ^= basis[top]
                else:
                    basis[top] = v
                    break
            else:
                return False
        return True

    return test


def _combinations_guarded(n: int, e: int, cap: int):
    if math.comb(n, e) > cap:
        raise SearchLimitExceeded(n, e, cap)
    return itertools.combinations(range(n), e)


def find_puncture(M: BitMatrix, e: int, target: str = "") -> Puncture | None:
    """Find an ``e``-puncture of ``M``: the first ``e`` non-pivot columns of its RREF.

    Those always work. No ``e``-puncture exists past the nullity, since the
    ``n - e`` surviving columns must still carry the full rank.
    """
    if e < 0:
        raise ValueError("e must be non-negative")
    free = M.rref.free_cols
    if e <= len(free):
        return Puncture(tuple(free[:e]), target)
    return None


def find_simultaneous_bipuncture(
    M1: BitMatrix, M2: BitMatrix, e: int, cap: int = DEFAULT_SEARCH_CAP
) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Lexicographically first disjoint pair of ``e``-sets, each puncturing both matrices.

    ``None`` means the whole search space was exhausted.
    """
    if M1.ncols != M2.ncols:
        raise ValueError(f"column counts differ: {M1.ncols} vs {M2.ncols}")
    n = M1.ncols
    if e < 0:
        raise ValueError("e must be non-negative")
    if 2 * e > n:
        return None
    t1, t2 = _puncture_mask_test(M1), _puncture_mask_test(M2)
    valid = [c for c in _combinations_guarded(n, e, cap) if t1(m := indicator(c)) and t2(m)]
    return _first_disjoint_pair(valid)


def _first_disjoint_pair(valid: Sequence[tuple[int, ...]]):
    if not valid:
        return None
    masks = [indicator(c) for c in valid]
    if max(masks) < (1 << 63):
        arr = np.array(masks, dtype=np.int64)
        for g, mg in enumerate(masks):
            hits = np.flatnonzero((arr & mg) == 0)
            if hits.size:
                return valid[g], valid[int(hits[0])]
        return None
    for g, mg in enumerate(masks):
        for d, md in enumerate(masks):
            if not mg & md:
                return valid[g], valid[d]
    return None


# -- canonical form and robustness ------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    """``G' = (I_k J)`` and ``H' = (J^T I_m)`` on the permuted columns.

    ``perm[t]`` is the original column placed at position ``t``.
    """

    G: BitMatrix
    H: BitMatrix
    J: BitMatrix
    perm: tuple[int, ...]


def _canonical_from_info_set(code: ClassicalCode, info: Sequence[int]) -> CanonicalForm:
    info = list(info)
    rest = [j for j in range(code.n) if j not in set(info)]
    perm = tuple(info + rest)
    Gp = code.G.select_columns(perm).rref.matrix
    k = code.k
    if Gp.select_columns(range(k)) != BitMatrix.identity(k):
        raise ValueError("columns do not form an information set")
    J = Gp.select_columns(range(k, code.n))
    Hp = J.T.hstack(BitMatrix.identity(code.n - k))
    return CanonicalForm(Gp.select_rows(range(k)), Hp, J, perm)


def canonical_form(code: ClassicalCode) -> CanonicalForm:
    """Canonical generator/check pair with pivot columns of ``G`` moved first."""
    if code.k == 0:
        raise ValueError("canonical form needs k >= 1")
    return _canonical_from_info_set(code, code.G.rref.pivot_cols)


@dataclass(frozen=True)
class RobustnessCertificate:
    verdict: str  # "robust" | "not_robust" | "undecided"
    k: int
    witness_bipuncture: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    witness_perm: tuple[int, ...] | None = None
    witness_J: BitMatrix | None = field(default=None, compare=False)
    search_exhausted: bool = False
    note: str = ""

    @property
    def robust(self) -> bool:
        return self.verdict == "robust"

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict, "k": self.k, "search_exhausted": self.search_exhausted}
        if self.witness_bipuncture is not None:
            g, d = self.witness_bipuncture
            out["witness_bipuncture"] = {"gamma": list(g), "delta": list(d)}
        if self.witness_perm is not None:
            out["witness_canonical"] = {
                "perm": list(self.witness_perm),
                "J": self.witness_J.to_literal().splitlines() if self.witness_J is not None else [],
            }
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_dict(cls, data: dict) -> RobustnessCertificate:
        bp = data.get("witness_bipuncture")
        canon = data.get("witness_canonical")
        J = None
        if canon is not None:
            ncols = len(canon["perm"]) - data["k"]
            J = BitMatrix.parse("\n".join(canon["J"]), ncols=ncols) if canon["J"] else BitMatrix.zeros(0, ncols)
        return cls(
            verdict=data["verdict"],
            k=data["k"],
            witness_bipuncture=(tuple(bp["gamma"]), tuple(bp["delta"])) if bp else None,
            witness_perm=tuple(canon["perm"]) if canon else None,
            witness_J=J,
            search_exhausted=data.get("search_exhausted", False),
            note=data.get("note", ""),
        )


def _bipuncture_from_canonical(code: ClassicalCode, cf: CanonicalForm) -> tuple[tuple[int, ...], tuple[int, ...]]:
    k = code.k
    gamma = tuple(sorted(cf.perm[:k]))
    # copivots of coker(J^T) index positions inside the m-block of H'
    coker = cokernel(cf.J.T)
    free = coker.rref.free_cols
    delta = tuple(sorted(cf.perm[k + t] for t in free))
    return gamma, delta


def check_bipuncture(code: ClassicalCode, gamma: Sequence[int], delta: Sequence[int]) -> list[str]:
    """Problems with ``(gamma, delta)`` as a simultaneous k-bipuncture of G and H."""
    problems = []
    k = code.k
    if len(gamma) != k or len(delta) != k:
        problems.append(f"bipuncture sizes {len(gamma)}, {len(delta)} != k = {k}")
    if set(gamma) & set(delta):
        problems.append("gamma and delta overlap")
    try:
        for label, s in (("gamma", gamma), ("delta", delta)):
            if not is_puncture(code.G, s):
                problems.append(f"{label} does not puncture G")
            if not is_puncture(code.H, s):
                problems.append(f"{label} does not puncture H")
    except (IndexError, ValueError) as exc:
        problems.append(str(exc))
    return problems


def is_robust(code: ClassicalCode, cap: int = DEFAULT_SEARCH_CAP) -> RobustnessCertificate:
    """Decide robustness through the canonical-form criterion.

    Looks for an information set ``S`` of ``G`` whose deletion keeps ``G`` at
    rank ``k``; then ``J = G_S^{-1} G_{S^c}`` has rank ``k``. Negative answers
    are confirmed by an exhaustive bipuncture scan.
    """
    k, n = code.k, code.n
    if k == 0:
        return RobustnessCertificate("robust", 0, ((), ()), search_exhausted=False, note="k = 0")
    if 2 * k > n:
        return RobustnessCertificate("not_robust", k, search_exhausted=True, note="2k > n")

    G = code.G
    cols = [G.column(j) for j in range(n)]

    def full_rank(indices) -> bool:
        basis: dict[int, int] = {}
        for j in indices:
            v = cols[j]
            while v:
                top = v.bit_length() - 1
                if top in basis:
                    v ^= basis[top]
                else:
                    basis[top] = v
                    break
            if len(basis) == k:
                return True
        return len(basis) == k

    def build(info) -> RobustnessCertificate:
        cf = _canonical_from_info_set(code, info)
        gamma, delta = _bipuncture_from_canonical(code, cf)
        problems = check_bipuncture(code, gamma, delta)
        if problems:
            raise AssertionError(f"robustness witness failed re-verification: {problems}")
        return RobustnessCertificate("robust", k, (gamma, delta), cf.perm, cf.J)

    pivots = G.rref.pivot_cols
    if math.comb(n, k) > cap:
        rest = [j for j in range(n) if j not in set(pivots)]
        if full_rank(rest):
            return build(pivots)
        return RobustnessCertificate("undecided", k, note=f"C({n}, {k}) exceeds search cap {cap}")

    for info in itertools.combinations(range(n), k):
        if not full_rank(info):
            continue
        rest = [j for j in range(n) if j not in set(info)]
        if full_rank(rest):
            return build(info)

    if find_simultaneous_bipuncture(G, code.H, k, cap) is not None:
        raise AssertionError("bipuncture exists although no canonical form has J of full rank")
    return RobustnessCertificate("not_robust", k, search_exhausted=True)


def verify_robustness(code: ClassicalCode, cert: RobustnessCertificate) -> list[str]:
    """Re-check a certificate from its witnesses, without searching."""
    problems = []
    if cert.k != code.k:
        problems.append(f"certificate k = {cert.k} but code has k = {code.k}")
        return problems
    if cert.verdict == "robust":
        if cert.witness_bipuncture is None:
            return ["robust verdict without a bipuncture witness"]
        problems += check_bipuncture(code, *cert.witness_bipuncture)
        if cert.witness_perm is not None:
            try:
                cf = _canonical_from_info_set(code, cert.witness_perm[: code.k])
            except ValueError as exc:
                problems.append(str(exc))
            else:
                if cf.J.rank != code.k:
                    problems.append("canonical J is not of full rank k")
                if cert.witness_J is not None and cf.J != cert.witness_J:
                    problems.append("embedded J disagrees with recomputed canonical form")
    elif cert.verdict == "not_robust" and not cert.search_exhausted:
        problems.append("negative verdict without exhaustion flag")
    return problems


def distance(code: ClassicalCode, limit: int = DEFAULT_DISTANCE_LIMIT) -> int | None:
    """Minimum weight over nonzero codewords, or ``None`` if ``2^k > limit``."""
    k = code.k
    if k == 0:
        raise ValueError("distance needs k >= 1")
    if (1 << k) > limit:
        return None
    basis = code.G.rows
    best = code.n
    v = 0
    for t in range(1, 1 << k):
        v ^= basis[(t & -t).bit_length() - 1]
        w = v.bit_count()
        if w < best:
            best = w
    return best
