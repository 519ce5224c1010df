"""Certificates that transversal gates of a hypergraph product act as Cliffords.

The certificate shows that the overlap of two regions, each carrying a complete
set of logical operators, is correctable. The regions are grids built from
simultaneous bipunctures of the factor codes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .codes import (
    DEFAULT_SEARCH_CAP,
    ClassicalCode,
    RobustnessCertificate,
    SearchLimitExceeded,
    find_simultaneous_bipuncture,
    is_puncture,
    is_robust,
    verify_robustness,
)
from .css import (
    CorrectabilityCertificate,
    QubitRegion,
    is_correctable,
    separation,
    supported_logical_dimension,
    verify_correctability,
)
from .f2core import bitstring, cokernel
from .hgp import HgpCode, is_vertical_sector, logical_basis, product, sector
from . import alist

CERTIFICATE_VERSION = "hgpcert.clifford-restriction/1"


class HypothesisError(ValueError):
    pass


@dataclass(frozen=True)
class Supports:
    gamma_X: tuple[int, ...]
    delta_X: tuple[int, ...]
    gamma_Z: tuple[int, ...]
    delta_Z: tuple[int, ...]
    gamma: QubitRegion
    delta: QubitRegion


def _check_pair(label: str, pair, e: int, mats) -> None:
    g, d = pair
    if len(g) != e or len(d) != e:
        raise HypothesisError(f"{label}: sizes {len(g)}, {len(d)} but need {e}")
    if set(g) & set(d):
        raise HypothesisError(f"{label}: sets overlap")
    for name, M in mats:
        for s in (g, d):
            if not is_puncture(M, s):
                raise HypothesisError(f"{label}: {list(s)} does not puncture {name}")


def build_supports(code: HgpCode, gamma_X, delta_X, gamma_Z, delta_Z) -> Supports:
    """Grid regions ``gamma_X x [m_b] + [n_a] x gamma_Z`` and the delta analogue."""
    if not is_vertical_sector(code):
        raise HypothesisError(f"code is not restricted to the vertical sector ({sector(code)})")
    A, B = code.A, code.B
    gX, dX, gZ, dZ = (tuple(sorted(s)) for s in (gamma_X, delta_X, gamma_Z, delta_Z))
    _check_pair("(gamma_X, delta_X)", (gX, dX), A.k, [("d_a", A.H), ("ker(d_a)^T", A.G)])
    _check_pair("(gamma_Z, delta_Z)", (gZ, dZ), B.k_T, [("d_b^T", B.H.T), ("coker(d_b)", cokernel(B.H))])

    all_rows, all_cols = range(code.n_a), range(code.m_b)
    gamma = QubitRegion(code.grid_region(gX, all_cols) | code.grid_region(all_rows, gZ), code.N)
    delta = QubitRegion(code.grid_region(dX, all_cols) | code.grid_region(all_rows, dZ), code.N)
    for name, region in (("gamma", gamma), ("delta", delta)):
        for pauli in ("X", "Z"):
            dim = supported_logical_dimension(code, region, pauli)
            if dim != code.k:
                raise HypothesisError(f"{name} carries {dim} independent {pauli} logicals, expected {code.k}")
    return Supports(gX, dX, gZ, dZ, gamma, delta)


def intersect_and_decompose(code: HgpCode, supports: Supports) -> tuple[QubitRegion, QubitRegion, QubitRegion]:
    """Return ``(gamma & delta, alpha, beta)`` with the two crossing blocks.

    ``alpha = gamma_X x delta_Z`` and ``beta = delta_X x gamma_Z``.
    """
    s = supports
    inter = s.gamma & s.delta
    alpha = QubitRegion(code.grid_region(s.gamma_X, s.delta_Z), code.N)
    beta = QubitRegion(code.grid_region(s.delta_X, s.gamma_Z), code.N)
    if (alpha | beta) != inter:
        raise HypothesisError("gamma & delta is not the union of the crossing blocks; punctures overlap")
    horizontal, vertical = separation(code, alpha, beta)
    if not (horizontal and vertical):
        raise HypothesisError("crossing blocks are not separated both ways")
    return inter, alpha, beta


@dataclass
class CliffordRestrictionCertificate:
    code: HgpCode
    factors_swapped: bool
    sector: str
    vertical_sector: bool
    A_robust: RobustnessCertificate
    B_transpose_robust: RobustnessCertificate
    conclusion: str  # "clifford_restricted" | "hypothesis_failed" | "region_not_correctable"
    supports: Supports | None = None
    regions: dict[str, QubitRegion] = field(default_factory=dict)
    correctability: dict[str, CorrectabilityCertificate] = field(default_factory=dict)
    union_agreement: bool | None = None

    @property
    def undecided(self) -> bool:
        return "undecided" in (self.A_robust.verdict, self.B_transpose_robust.verdict)

    def to_dict(self) -> dict:
        out: dict = {
            "version": CERTIFICATE_VERSION,
            "code": self.code.to_dict(),
            "factors_swapped": self.factors_swapped,
            "hypothesis": {
                "sector": self.sector,
                "vertical_sector": self.vertical_sector,
                "A_robust": self.A_robust.to_dict(),
                "B_transpose_robust": self.B_transpose_robust.to_dict(),
            },
            "N": self.code.N,
            "k": self.code.k,
            "conclusion": self.conclusion,
        }
        if self.supports is not None:
            s = self.supports
            out["punctures"] = {
                "gamma_X": list(s.gamma_X),
                "delta_X": list(s.delta_X),
                "gamma_Z": list(s.gamma_Z),
                "delta_Z": list(s.delta_Z),
            }
            out["regions"] = {name: r.indices for name, r in self.regions.items()}
            out["correctability"] = {name: c.to_dict() for name, c in self.correctability.items()}
            out["union_agreement"] = self.union_agreement
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def certify(A: ClassicalCode, B: ClassicalCode, cap: int = DEFAULT_SEARCH_CAP) -> CliffordRestrictionCertificate:
    """Run the full pipeline on ``A (x) B``; failures come back as verdicts."""
    code = product(A, B)
    swapped = False
    if sector(code) == "horizontal_restricted":
        A, B = B, A
        code = product(A, B)
        swapped = True
    vertical = is_vertical_sector(code)
    rA = is_robust(A, cap)
    rBt = is_robust(B.transpose(), cap)
    cert = CliffordRestrictionCertificate(code, swapped, sector(code), vertical, rA, rBt, "hypothesis_failed")
    if not (vertical and rA.robust and rBt.robust):
        return cert

    supports = build_supports(code, *rA.witness_bipuncture, *rBt.witness_bipuncture)
    inter, alpha, beta = intersect_and_decompose(code, supports)
    cert.supports = supports
    cert.regions = {"gamma": supports.gamma, "delta": supports.delta, "intersection": inter, "alpha": alpha, "beta": beta}
    cert.correctability = {
        "alpha": is_correctable(code, alpha),
        "beta": is_correctable(code, beta),
        "intersection": is_correctable(code, inter),
    }
    pieces_ok = cert.correctability["alpha"].correctable and cert.correctability["beta"].correctable
    direct_ok = cert.correctability["intersection"].correctable
    cert.union_agreement = pieces_ok == direct_ok
    cert.conclusion = "clifford_restricted" if pieces_ok and direct_ok else "region_not_correctable"
    return cert


def verify_certificate(data: dict) -> list[str]:
    """Re-check a serialized certificate from its witnesses alone.

    Returns the list of problems found; empty means the certificate holds.
    """
    problems: list[str] = []
    if data.get("version") != CERTIFICATE_VERSION:
        return [f"unsupported certificate version {data.get('version')!r}"]
    try:
        code = HgpCode.from_dict(data["code"])
    except (KeyError, ValueError) as exc:
        return [f"cannot rebuild code: {exc}"]
    A, B = code.A, code.B
    hyp = data["hypothesis"]
    if hyp["sector"] != sector(code):
        problems.append(f"sector recorded as {hyp['sector']}, recomputed {sector(code)}")
    vertical = is_vertical_sector(code)
    if hyp["vertical_sector"] != vertical:
        problems.append("vertical_sector flag disagrees with recomputation")
    if data.get("N") != code.N or data.get("k") != code.k:
        problems.append("recorded N or k disagrees with recomputation")
    rA = RobustnessCertificate.from_dict(hyp["A_robust"])
    rBt = RobustnessCertificate.from_dict(hyp["B_transpose_robust"])
    problems += [f"A: {p}" for p in verify_robustness(A, rA)]
    problems += [f"B^T: {p}" for p in verify_robustness(B.transpose(), rBt)]

    conclusion = data["conclusion"]
    hypothesis_holds = vertical and rA.robust and rBt.robust
    if conclusion == "hypothesis_failed":
        if hypothesis_holds:
            problems.append("hypothesis_failed but every hypothesis check passes")
        return problems
    if not hypothesis_holds:
        return problems + [f"conclusion {conclusion} without a satisfied hypothesis"]

    p = data["punctures"]
    if (tuple(p["gamma_X"]), tuple(p["delta_X"])) != rA.witness_bipuncture:
        problems.append("X punctures differ from the A robustness witness")
    if (tuple(p["gamma_Z"]), tuple(p["delta_Z"])) != rBt.witness_bipuncture:
        problems.append("Z punctures differ from the B^T robustness witness")
    try:
        supports = build_supports(code, p["gamma_X"], p["delta_X"], p["gamma_Z"], p["delta_Z"])
        inter, alpha, beta = intersect_and_decompose(code, supports)
    except HypothesisError as exc:
        return problems + [str(exc)]
    expected = {"gamma": supports.gamma, "delta": supports.delta, "intersection": inter, "alpha": alpha, "beta": beta}
    for name, region in expected.items():
        if data["regions"].get(name) != region.indices:
            problems.append(f"region {name} disagrees with the puncture formulas")

    verdicts = {}
    for name in ("alpha", "beta", "intersection"):
        c = CorrectabilityCertificate.from_dict(data["correctability"][name], code.N)
        if c.region != expected[name]:
            problems.append(f"correctability[{name}] is about the wrong region")
        problems += [f"{name}: {msg}" for msg in verify_correctability(code, c)]
        verdicts[name] = c.correctable
    all_ok = all(verdicts.values())
    if conclusion == "clifford_restricted" and not all_ok:
        problems.append("clifford_restricted with a non-correctable region")
    if conclusion == "region_not_correctable" and all_ok:
        problems.append("region_not_correctable but every region is correctable")
    agreement = (verdicts["alpha"] and verdicts["beta"]) == verdicts["intersection"]
    if data.get("union_agreement") != agreement:
        problems.append("union_agreement flag disagrees with the embedded verdicts")
    return problems


# -- exploratory searches ------------------------------------------------------


def _bipuncture_for(check, generator, e: int, cap: int):
    """Simultaneous bipuncture of (check, generator), else one of check alone."""
    pair = find_simultaneous_bipuncture(check, generator, e, cap)
    if pair is not None:
        return pair, True
    pair = find_simultaneous_bipuncture(check, check, e, cap)
    if pair is not None:
        return pair, False
    return None, False


@dataclass
class CounterexampleReport:
    instances: list[dict]
    examined: int
    skipped: int
    exhausted: bool

    def to_dict(self) -> dict:
        return {
            "examined": self.examined,
            "skipped": self.skipped,
            "budget_exhausted": self.exhausted,
            "instances": self.instances,
        }


def general_supports(code: HgpCode, cap: int = DEFAULT_SEARCH_CAP):
    """Both-sector analogue of :func:`build_supports`.

    Returns ``(gamma, delta, info)`` or ``None`` when some factor lacks even
    a plain bipuncture of its check matrix.
    """
    A, B = code.A, code.B
    da, db = A.H, B.H
    specs = {
        "X_vertical": (da, A.G, A.k),
        "Z_vertical": (db.T, cokernel(db), B.k_T),
        "Z_horizontal": (da.T, cokernel(da), A.k_T),
        "X_horizontal": (db, B.G, B.k),
    }
    pairs, simultaneous = {}, {}
    for name, (check, gen, e) in specs.items():
        pair, simul = _bipuncture_for(check, gen, e, cap)
        if pair is None:
            return None
        pairs[name], simultaneous[name] = pair, simul

    def region(side: int) -> QubitRegion:
        mask = code.grid_region(pairs["X_vertical"][side], range(code.m_b))
        mask |= code.grid_region(range(code.n_a), pairs["Z_vertical"][side])
        off = code.n_vertical
        for p in pairs["Z_horizontal"][side]:
            for q in range(code.n_b):
                mask |= 1 << (off + p * code.n_b + q)
        for q in pairs["X_horizontal"][side]:
            for p in range(code.m_a):
                mask |= 1 << (off + p * code.n_b + q)
        return QubitRegion(mask, code.N)

    gamma, delta = region(0), region(1)
    for r in (gamma, delta):
        for pauli in ("X", "Z"):
            if supported_logical_dimension(code, r, pauli) != code.k:
                raise AssertionError("generalized support is not complete")
    info = {name: {"gamma": list(g), "delta": list(d), "simultaneous": simultaneous[name]} for name, (g, d) in pairs.items()}
    return gamma, delta, info


def counterexample_search(
    stream: Iterable[tuple[ClassicalCode, ClassicalCode]], budget: int, cap: int = DEFAULT_SEARCH_CAP
) -> CounterexampleReport:
    """Look for products whose two complete supports overlap non-correctably."""
    instances = []
    examined = skipped = 0
    it = iter(stream)
    exhausted = False
    while True:
        if examined >= budget:
            exhausted = True
            break
        try:
            A, B = next(it)
        except StopIteration:
            break
        examined += 1
        code = product(A, B)
        try:
            built = general_supports(code, cap)
        except SearchLimitExceeded:
            built = None
        if built is None:
            skipped += 1
            continue
        gamma, delta, info = built
        cert = is_correctable(code, gamma & delta)
        if cert.correctable:
            continue
        pauli, v = cert.witness
        instances.append(
            {
                "index": examined - 1,
                "H_a": alist.dumps(A.H),
                "H_b": alist.dumps(B.H),
                "sector": sector(code),
                "N": code.N,
                "k": code.k,
                "punctures": info,
                "intersection": (gamma & delta).indices,
                "witness": {"type": pauli, "vector": bitstring(v, code.N)},
            }
        )
    return CounterexampleReport(instances, examined, skipped, exhausted)


def _random_combo(rng: np.random.Generator, rows, nonzero: bool) -> int:
    if not rows:
        return 0
    while True:
        bits = rng.integers(0, 2, size=len(rows))
        v = 0
        for b, r in zip(bits, rows):
            if b:
                v ^= r
        if v or not nonzero or not any(rows):
            return v


def commutator_support_experiment(code: HgpCode, trials: int, seed: int) -> dict:
    """Fraction of random X/Z logical pairs whose support overlap is correctable."""
    basis = logical_basis(code)
    records = []
    for t in range(trials):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, t])))
        p = _random_combo(rng, basis.lx.rows, True) ^ _random_combo(rng, code.hx.rows, False)
        q = _random_combo(rng, basis.lz.rows, True) ^ _random_combo(rng, code.hz.rows, False)
        overlap = p & q
        cert = is_correctable(code, overlap)
        records.append({"trial": t, "overlap_size": overlap.bit_count(), "correctable": cert.correctable})
    good = sum(r["correctable"] for r in records)
    return {
        "trials": trials,
        "seed": seed,
        "correctable": good,
        "fraction_correctable": good / trials if trials else None,
        "records": records,
    }


def toric_family(lengths: Iterable[int]) -> Iterator[tuple[ClassicalCode, ClassicalCode]]:
    from .codes import cycle_code

    for la, lb in itertools.product(lengths, repeat=2):
        yield cycle_code(la), cycle_code(lb)
