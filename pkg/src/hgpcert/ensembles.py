"""Gallager LDPC ensembles and the robustness survey over them.

Randomness comes from numpy's Philox-4x64 counter-based generator, keyed
through ``SeedSequence([seed, index])``, so sample ``index`` is the same no
matter how the survey is split across workers.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterator

import numpy as np

from .codes import (
    DEFAULT_DISTANCE_LIMIT,
    DEFAULT_SEARCH_CAP,
    ClassicalCode,
    distance,
    is_robust,
    verify_robustness,
)
from .f2core import BitMatrix

RNG_NAME = "philox4x64-10"


def rng_for(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


@dataclass(frozen=True)
class EnsembleSpec:
    n: int
    col_weight: int
    row_weight: int
    samples: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.col_weight < 2:
            raise ValueError("column weight must be at least 2")
        if self.row_weight < 1 or self.n < 1:
            raise ValueError("n and row weight must be positive")
        if (self.col_weight * self.n) % self.row_weight:
            raise ValueError("col_weight * n must be divisible by row_weight")
        # the strip construction tiles each strip with disjoint row blocks
        if self.n % self.row_weight:
            raise ValueError("n must be divisible by row_weight for the strip construction")
        if self.samples < 0:
            raise ValueError("samples must be non-negative")


def gallager(spec: EnsembleSpec, index: int) -> ClassicalCode:
    """Sample ``index`` of the ensemble: ``col_weight`` permuted strips."""
    n, r = spec.n, spec.row_weight
    block = (1 << r) - 1
    strip0 = [block << (t * r) for t in range(n // r)]
    rows = list(strip0)
    rng = rng_for(spec.seed, index)
    for _ in range(spec.col_weight - 1):
        perm = rng.permutation(n)
        for base in strip0:
            v = 0
            c = 0
            while base:
                if base & 1:
                    v |= 1 << int(perm[c])
                base >>= 1
                c += 1
            rows.append(v)
    name = f"gallager(n={n},j={spec.col_weight},r={r},seed={spec.seed},i={index})"
    return ClassicalCode(BitMatrix.from_rows(rows, n), name)


@dataclass
class SurveyRecord:
    index: int
    n: int
    k: int
    distance: int | None
    robust: str
    undecided: bool
    in_filter: bool


@dataclass
class SurveyReport:
    spec: EnsembleSpec
    records: list[SurveyRecord]

    @property
    def filtered(self) -> list[SurveyRecord]:
        return [r for r in self.records if r.in_filter]

    @property
    def robust_fraction(self) -> float | None:
        sel = self.filtered
        if not sel:
            return None
        return sum(r.robust == "robust" for r in sel) / len(sel)

    def aggregate(self) -> dict:
        sel = self.filtered
        return {
            "samples": len(self.records),
            "filtered": len(sel),
            "robust": sum(r.robust == "robust" for r in sel),
            "not_robust": sum(r.robust == "not_robust" for r in sel),
            "undecided": sum(r.undecided for r in self.records),
            "distance_uncomputed": sum(r.distance is None for r in self.records),
            "robust_fraction": self.robust_fraction,
        }

    def to_dict(self) -> dict:
        return {
            "spec": asdict(self.spec),
            "rng": RNG_NAME,
            "filter": "distance >= 3 and k <= n/2",
            "records": [asdict(r) for r in self.records],
            "aggregate": self.aggregate(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        fields = ["index", "n", "k", "distance", "robust", "undecided", "in_filter"]
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        for r in self.records:
            row = asdict(r)
            row["distance"] = "uncomputed" if r.distance is None else r.distance
            writer.writerow(row)
        return buf.getvalue()


def _survey_one(args) -> SurveyRecord:
    spec, index, cap, distance_limit = args
    code = gallager(spec, index)
    k = code.k
    d = distance(code, distance_limit) if k else None
    cert = is_robust(code, cap)
    if verify_robustness(code, cert):
        raise AssertionError(f"sample {index}: robustness certificate failed re-verification")
    in_filter = d is not None and d >= 3 and 2 * k <= code.n and cert.verdict != "undecided"
    return SurveyRecord(index, code.n, k, d, cert.verdict, cert.verdict == "undecided", in_filter)


def survey(
    spec: EnsembleSpec,
    cap: int = DEFAULT_SEARCH_CAP,
    distance_limit: int = DEFAULT_DISTANCE_LIMIT,
    workers: int = 1,
) -> SurveyReport:
    jobs = [(spec, i, cap, distance_limit) for i in range(spec.samples)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_survey_one, jobs, chunksize=8))
    else:
        records = [_survey_one(j) for j in jobs]
    return SurveyReport(spec, records)


def random_parity_check(rng: np.random.Generator, m: int, n: int, density: float = 0.5) -> BitMatrix:
    bits = (rng.random((m, n)) < density).astype(np.uint8)
    return BitMatrix.from_array(bits) if m else BitMatrix.zeros(0, n)


def random_code(
    rng: np.random.Generator, n_max: int = 8, n_min: int = 1, near_square: bool = False, nondegenerate: bool = False
) -> ClassicalCode:
    """Random parity check with ``n <= n_max`` bits.

    ``near_square`` keeps ``m`` within two of ``n``; ``nondegenerate`` rejects
    zero rows and zero columns.
    """
    while True:
        n = int(rng.integers(n_min, n_max + 1))
        if near_square:
            m = int(rng.integers(max(1, n - 2), n + 2))
            density = 0.4
        else:
            m = int(rng.integers(0, n_max + 1))
            density = float(rng.uniform(0.2, 0.7))
        H = random_parity_check(rng, m, n, density)
        if not nondegenerate or (all(H.rows) and all(H.T.rows)):
            return ClassicalCode(H)


def random_code_pairs(seed: int, n_max: int = 8) -> Iterator[tuple[ClassicalCode, ClassicalCode]]:
    """Endless deterministic stream of small non-degenerate code pairs."""
    i = 0
    while True:
        rng = rng_for(seed, i)
        pair = tuple(random_code(rng, n_max, 3, near_square=True, nondegenerate=True) for _ in range(2))
        yield pair
        i += 1
