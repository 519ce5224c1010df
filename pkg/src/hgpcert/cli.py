"""Command-line entry point.

Exit status: 0 success or affirmative verdict, 1 negative verdict, 2 usage
error, 3 undecided (search cap hit), 4 malformed input file, 5 missing file.

Limits may be set by flag or through ``HGPCERT_SEARCH_CAP``,
``HGPCERT_DISTANCE_LIMIT`` and ``HGPCERT_TAUT_BUDGET``; flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import alist
from .codes import (
    DEFAULT_DISTANCE_LIMIT,
    DEFAULT_SEARCH_CAP,
    ClassicalCode,
    SearchLimitExceeded,
    distance,
    find_puncture,
    find_simultaneous_bipuncture,
    is_robust,
)
from .ensembles import EnsembleSpec, random_code_pairs, survey
from .hgp import DEFAULT_TAUT_BUDGET, logical_basis, product, sector
from .transversal import certify, counterexample_search, verify_certificate

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_UNDECIDED, EXIT_BAD_INPUT, EXIT_MISSING = 0, 1, 2, 3, 4, 5
DEFAULT_SEED = 0


class InputError(Exception):
    def __init__(self, message: str, status: int):
        super().__init__(message)
        self.status = status


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{name}={raw!r} is not an integer", EXIT_USAGE) from None
    if value <= 0:
        raise InputError(f"{name} must be positive", EXIT_USAGE)
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _load_code(path: str) -> ClassicalCode:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {path}", EXIT_MISSING)
    try:
        return ClassicalCode(alist.read(p), p.stem)
    except alist.AlistError as exc:
        raise InputError(f"malformed alist {path}: {exc}", EXIT_BAD_INPUT) from None


def _emit(args, payload: dict, text: str | None = None) -> None:
    # --out always gets the JSON record so certificates stay machine-readable
    as_json = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        Path(args.out).write_text(as_json)
    if args.format == "text" and text is not None:
        sys.stdout.write(text.rstrip("\n") + "\n")
    elif not getattr(args, "out", None):
        sys.stdout.write(as_json)


def cmd_analyze(args) -> int:
    code = _load_code(args.alist)
    d = distance(code, args.distance_limit) if code.k else None
    payload = {"n": code.n, "m": code.m, "k": code.k, "k_T": code.k_T, "rank": code.rank, "distance": d}
    text = f"n={code.n} m={code.m} k={code.k} k_T={code.k_T} d={'?' if d is None else d}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_puncture(args) -> int:
    code = _load_code(args.alist)
    try:
        if args.bi:
            pair = find_simultaneous_bipuncture(code.G, code.H, args.e, args.search_cap)
            found = pair is not None
            payload = {"e": args.e, "bipuncture": {"gamma": list(pair[0]), "delta": list(pair[1])} if found else None}
            text = f"gamma={list(pair[0])} delta={list(pair[1])}" if found else "no simultaneous bipuncture"
        else:
            M = code.H if args.target == "H" else code.G
            p = find_puncture(M, args.e, target=args.target)
            found = p is not None
            payload = {"e": args.e, "target": args.target, "puncture": list(p.indices) if found else None}
            text = f"puncture={list(p.indices)}" if found else "no puncture"
    except SearchLimitExceeded as exc:
        _emit(args, {"e": args.e, "undecided": str(exc)}, f"undecided: {exc}")
        return EXIT_UNDECIDED
    _emit(args, payload, text)
    return EXIT_OK if found else EXIT_NEGATIVE


def cmd_robust(args) -> int:
    code = _load_code(args.alist)
    cert = is_robust(code, args.search_cap)
    _emit(args, cert.to_dict(), f"{cert.verdict} (k={cert.k})")
    return {"robust": EXIT_OK, "not_robust": EXIT_NEGATIVE}.get(cert.verdict, EXIT_UNDECIDED)


def cmd_hgp(args) -> int:
    A, B = _load_code(args.alist_a), _load_code(args.alist_b)
    code = product(A, B)
    payload = code.to_dict()
    payload.update({"N": code.N, "k": code.k, "sector": sector(code), "logical_basis": logical_basis(code).to_dict()})
    text = f"N={code.N} k={code.k} sector={sector(code)} X-checks={code.hx.nrows} Z-checks={code.hz.nrows}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_certify(args) -> int:
    A, B = _load_code(args.alist_a), _load_code(args.alist_b)
    cert = certify(A, B, args.search_cap)
    _emit(args, cert.to_dict(), f"conclusion={cert.conclusion} sector={cert.sector}")
    if cert.conclusion == "clifford_restricted":
        return EXIT_OK
    return EXIT_UNDECIDED if cert.undecided else EXIT_NEGATIVE


def cmd_verify(args) -> int:
    p = Path(args.certificate)
    if not p.exists():
        raise InputError(f"no such file: {p}", EXIT_MISSING)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed certificate {p}: {exc}", EXIT_BAD_INPUT) from None
    try:
        problems = verify_certificate(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed certificate {p}: {exc!r}", EXIT_BAD_INPUT) from None
    payload = {"valid": not problems, "problems": problems, "conclusion": data.get("conclusion")}
    _emit(args, payload, "valid" if not problems else "INVALID\n" + "\n".join(problems))
    return EXIT_OK if not problems else EXIT_NEGATIVE


def cmd_survey(args) -> int:
    try:
        spec = EnsembleSpec(args.n, args.col_weight, args.row_weight, args.samples, args.seed)
    except ValueError as exc:
        raise InputError(str(exc), EXIT_USAGE) from None
    report = survey(spec, args.search_cap, args.distance_limit, args.workers)
    if args.format == "csv":
        out = report.to_csv()
    elif args.format == "text":
        agg = report.aggregate()
        out = " ".join(f"{k}={v}" for k, v in agg.items()) + "\n"
    else:
        out = report.to_json()
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    if args.export_dir:
        from .ensembles import gallager

        d = Path(args.export_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i in range(spec.samples):
            alist.write(gallager(spec, i).H, d / f"sample_{i:05d}.alist")
    return EXIT_OK


def cmd_counterexample(args) -> int:
    report = counterexample_search(random_code_pairs(args.seed, args.n_max), args.budget, args.search_cap)
    payload = report.to_dict()
    payload["seed"] = args.seed
    _emit(args, payload, f"examined={report.examined} skipped={report.skipped} hits={len(report.instances)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--search-cap", type=_positive, default=None, help="max subsets per exhaustive search")
    common.add_argument("--distance-limit", type=_positive, default=None, help="max codewords to enumerate")
    common.add_argument("--taut-budget", type=_positive, default=None, help="max taut profiles per family")
    common.add_argument("--format", choices=["json", "text", "csv"], default="json")
    common.add_argument("--out", default=None, help="write the JSON record here (survey: the chosen format)")

    parser = argparse.ArgumentParser(prog="hgpcert", description="Hypergraph product codes: construction, robustness and certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="n, m, k, k_T and distance of a code")
    p.add_argument("alist")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("puncture", parents=[common], help="find an e-puncture or simultaneous bipuncture")
    p.add_argument("alist")
    p.add_argument("--e", type=_non_negative, required=True)
    p.add_argument("--bi", action="store_true", help="simultaneous e-bipuncture of G and H")
    p.add_argument("--target", choices=["H", "G"], default="H")
    p.set_defaults(func=cmd_puncture)

    p = sub.add_parser("robust", parents=[common], help="decide robustness with a certificate")
    p.add_argument("alist")
    p.set_defaults(func=cmd_robust)

    p = sub.add_parser("hgp", parents=[common], help="build a hypergraph product")
    p.add_argument("alist_a")
    p.add_argument("alist_b")
    p.set_defaults(func=cmd_hgp)

    p = sub.add_parser("certify", parents=[common], help="Clifford-restriction certificate for A (x) B")
    p.add_argument("alist_a")
    p.add_argument("alist_b")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[common], help="re-check a certificate file")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("survey", parents=[common], help="robustness survey over a Gallager ensemble")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--col-weight", type=_positive, required=True)
    p.add_argument("--row-weight", type=_positive, required=True)
    p.add_argument("--samples", type=_non_negative, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--export-dir", default=None, help="also write every sample as an alist file")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("counterexample", parents=[common], help="search for non-correctable overlaps")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--budget", type=_non_negative, required=True)
    p.add_argument("--n-max", type=_positive, default=8)
    p.set_defaults(func=cmd_counterexample)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        if args.search_cap is None:
            args.search_cap = _env_int("HGPCERT_SEARCH_CAP", DEFAULT_SEARCH_CAP)
        if args.distance_limit is None:
            args.distance_limit = _env_int("HGPCERT_DISTANCE_LIMIT", DEFAULT_DISTANCE_LIMIT)
        if args.taut_budget is None:
            args.taut_budget = _env_int("HGPCERT_TAUT_BUDGET", DEFAULT_TAUT_BUDGET)
        if args.format == "csv" and args.command != "survey":
            raise InputError("csv output is only available for survey", EXIT_USAGE)
        return args.func(args)
    except InputError as exc:
        print(f"hgpcert: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
