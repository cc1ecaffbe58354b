"""Command-line interface and (de)serialization.

Subcommands: det, per, count, coeff, witness, gt, scan.  Output is
deterministic: identical arguments produce byte-identical output no matter
how many workers are used.  Big integers are emitted as decimal strings so
that consumers with 53-bit numbers cannot silently truncate them.

Exit codes: 0 success, 1 invalid input, 2 term budget exceeded, 3 internal
consistency failure (the latter always indicates a bug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .cyclotomic import is_prime_power
from .errors import (
    BudgetExceeded,
    CirculantError,
    ConsistencyError,
    InvalidInput,
)
from .expand import (
    CountComparison,
    ExpansionReport,
    coefficient_oracle,
    compare_counts,
    det_expand,
    det_expand_general,
    per_expand,
    support_congruence_check,
    vanishing_predicate,
    vanishing_witness,
)
from .poly import exponent_of, multiset_of
from .togliatti import (
    GroupAction,
    GTReport,
    minimality_check,
    scan_square_systems,
    scan_ternary_systems,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_INTERNAL = 3


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def expansion_report_to_dict(report: ExpansionReport, kind: str) -> dict:
    return {
        "kind": kind,
        "n": report.nvars,
        "degree": report.degree,
        "alpha": list(report.alpha),
        "count": report.term_count,
        "terms": [
            {"multiset": list(m), "coeff": str(c)} for m, c in report.terms
        ],
    }


def expansion_report_from_dict(data: dict) -> ExpansionReport:
    return ExpansionReport(
        nvars=data["n"],
        degree=data["degree"],
        alpha=tuple(data["alpha"]),
        terms=tuple((tuple(t["multiset"]), int(t["coeff"]))
                    for t in data["terms"]),
    )


def gt_report_to_dict(report: GTReport) -> dict:
    return {
        "kind": "gt",
        "d": report.action.degree,
        "alpha": list(report.action.exponents),
        "n": report.action.nvars,
        "mu": report.mu,
        "togliatti_bound": str(report.togliatti_bound),
        "bound_satisfied": report.bound_satisfied,
        "wlp_witness_verified": report.wlp_witness_verified,
        "rank": report.rank,
        "source_dim": report.source_dim,
        "target_dim": report.target_dim,
        "injective": report.injective,
        "minimal": report.minimal,
        "criterion": report.criterion,
        "generators": [list(multiset_of(e)) for e in report.generators],
        "missing": [list(multiset_of(e)) for e in report.missing_monomials],
    }


def gt_report_from_dict(data: dict) -> GTReport:
    action = GroupAction(data["d"], tuple(data["alpha"]))
    nvars = action.nvars
    return GTReport(
        action=action,
        generators=tuple(exponent_of(tuple(g), nvars)
                         for g in data["generators"]),
        mu=data["mu"],
        togliatti_bound=int(data["togliatti_bound"]),
        bound_satisfied=data["bound_satisfied"],
        wlp_witness_verified=data["wlp_witness_verified"],
        rank=data["rank"],
        source_dim=data["source_dim"],
        target_dim=data["target_dim"],
        injective=data["injective"],
        minimal=data["minimal"],
        missing_monomials=tuple(exponent_of(tuple(g), nvars)
                                for g in data["missing"]),
    )


def _json(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _bool(value: bool) -> str:
    return "true" if value else "false"


def _pretty_terms(report: ExpansionReport, title: str) -> str:
    lines = [f"{title}: {report.term_count} terms, degree {report.degree},"
             f" {report.nvars} variables, alpha={list(report.alpha)}"]
    for m, c in report.terms:
        lines.append(f"  {' '.join(map(str, m))}  {c}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------

def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidInput(f"{flag} expects comma-separated integers, got {text!r}")


def _parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise InvalidInput(f"--n-range expects A..B, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise InvalidInput(f"--n-range expects integers, got {text!r}")


def _resolve_budget(args) -> int | None:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("CIRCULANT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidInput(f"CIRCULANT_BUDGET must be an integer, got {env!r}")
    return None


def _resolve_workers(args) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise InvalidInput(f"--workers must be >= 1, got {args.workers}")
        return args.workers
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circulant",
        description="Exact expansions of generic circulant determinants and"
                    " permanents, and Togliatti / weak Lefschetz analysis of"
                    " the associated monomial ideals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt_default):
        p.add_argument("--format", choices=("json", "csv", "pretty"),
                       default=fmt_default)
        p.add_argument("--budget", type=int, default=None,
                       help="term budget (env CIRCULANT_BUDGET overrides the default)")
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--out", default=None, help="write output to this path")

    p = sub.add_parser("det", help="expand a circulant determinant")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--alpha", default=None)
    common(p, "json")

    p = sub.add_parser("per", help="expand a circulant permanent")
    p.add_argument("--n", type=int, required=True)
    common(p, "json")

    p = sub.add_parser("count", help="tabulate determinant vs permanent term counts")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-range", default=None)
    common(p, "csv")

    p = sub.add_parser("coeff", help="one determinant coefficient, without expansion")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--multiset", required=True)
    common(p, "json")

    p = sub.add_parser("witness", help="vanishing-coefficient witness for a"
                                       " non-prime-power order")
    p.add_argument("--n", type=int, required=True)
    common(p, "json")

    p = sub.add_parser("gt", help="full report for one GT-system")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", required=True)
    common(p, "json")

    p = sub.add_parser("scan", help="minimality scans over families of GT-systems")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--square", type=int, metavar="N_MAX",
                       help="square systems with exponents 0..N-1 for N = 3..N_MAX")
    group.add_argument("--ternary", type=int, metavar="D_MAX",
                       help="three-variable systems (0, n, m) for d = 3..D_MAX")
    common(p, "csv")
    return parser


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_det(args) -> str:
    budget = _resolve_budget(args)
    if args.d is not None:
        if args.alpha is None:
            raise InvalidInput("det --d requires --alpha")
        alpha = _parse_ints(args.alpha, "--alpha")
        report = det_expand_general(args.d, alpha, budget=budget)
    elif args.n is not None:
        report = det_expand(args.n, budget=budget)
    else:
        raise InvalidInput("det requires --n or --d with --alpha")
    if args.format == "pretty":
        return _pretty_terms(report, "det")
    if args.format == "csv":
        return _csv(["multiset", "coeff"],
                    [[" ".join(map(str, m)), str(c)] for m, c in report.terms])
    return _json(expansion_report_to_dict(report, "det"))


def _cmd_per(args) -> str:
    report = per_expand(args.n)
    if args.format == "pretty":
        return _pretty_terms(report, "per")
    if args.format == "csv":
        return _csv(["multiset", "coeff"],
                    [[" ".join(map(str, m)), str(c)] for m, c in report.terms])
    return _json(expansion_report_to_dict(report, "per"))


def _count_cell(cell) -> CountComparison:
    n, budget = cell
    return compare_counts(n, budget=budget)


def _cmd_count(args) -> str:
    budget = _resolve_budget(args)
    if args.n_range is not None:
        lo, hi = _parse_range(args.n_range)
    elif args.n is not None:
        lo = hi = args.n
    else:
        raise InvalidInput("count requires --n or --n-range")
    if lo < 1 or hi < lo:
        raise InvalidInput(f"empty or invalid range {lo}..{hi}")
    cells = [(n, budget) for n in range(lo, hi + 1)]
    workers = _resolve_workers(args)
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(cells))) as pool:
            rows = list(pool.map(_count_cell, cells))
    else:
        rows = [_count_cell(c) for c in cells]
    if args.format == "json":
        return _json({"kind": "count", "rows": [
            {"n": r.n, "d": str(r.d), "p": str(r.p), "equal": r.equal,
             "prime_power": r.prime_power} for r in rows]})
    if args.format == "pretty":
        lines = [f"{'n':>4} {'d':>12} {'p':>12} {'equal':>6} {'prime_power':>12}"]
        for r in rows:
            lines.append(f"{r.n:>4} {r.d:>12} {r.p:>12}"
                         f" {_bool(r.equal):>6} {_bool(r.prime_power):>12}")
        return "\n".join(lines) + "\n"
    return _csv(["n", "d", "p", "equal", "prime_power"],
                [[r.n, str(r.d), str(r.p), _bool(r.equal), _bool(r.prime_power)]
                 for r in rows])


def _cmd_coeff(args) -> str:
    multiset = _parse_ints(args.multiset, "--multiset")
    value = coefficient_oracle(args.n, multiset)
    payload = {"kind": "coeff", "n": args.n, "multiset": list(multiset),
               "coeff": str(value)}
    if args.format == "pretty":
        return f"coefficient of {list(multiset)} in det (n={args.n}): {value}\n"
    return _json(payload)


def _cmd_witness(args) -> str:
    params, multiset = vanishing_witness(args.n)
    coefficient = coefficient_oracle(args.n, multiset) if args.n <= 16 else None
    payload = {
        "kind": "witness",
        "n": args.n,
        "params": {
            "n": params.n, "m": params.m, "lambda": params.lam,
            "mu": params.mu, "m0": params.m0, "m1": params.m1,
            "a1": params.a1, "a2": params.a2, "a3": params.a3,
        },
        "multiset": list(multiset),
        "congruence_ok": support_congruence_check(args.n, multiset),
        "predicate_ok": vanishing_predicate(args.n, multiset),
        "coefficient": "0" if coefficient is None else str(coefficient),
    }
    if args.format == "pretty":
        return (f"witness for n={args.n}: {list(multiset)}"
                f" (split {params.n}*{params.m}, lambda={params.lam},"
                f" mu={params.mu}), coefficient {payload['coefficient']}\n")
    return _json(payload)


def _cmd_gt(args) -> str:
    budget = _resolve_budget(args)
    alpha = _parse_ints(args.alpha, "--alpha")
    report = minimality_check(GroupAction(args.d, alpha), budget=budget)
    if args.format == "pretty":
        lines = [
            f"GT-system d={args.d}, alpha={list(alpha)}:"
            f" mu={report.mu}, bound={report.togliatti_bound}"
            f" ({'ok' if report.bound_satisfied else 'exceeded'})",
            f"  WLP failure witness verified: {_bool(report.wlp_witness_verified)}",
            f"  rank {report.rank} on source {report.source_dim} ->"
            f" target {report.target_dim}",
            f"  minimal: {_bool(report.minimal)}"
            f" ({len(report.missing_monomials)} missing)",
        ]
        return "\n".join(lines) + "\n"
    return _json(gt_report_to_dict(report))


def _cmd_scan(args) -> str:
    budget = _resolve_budget(args)
    workers = _resolve_workers(args)
    if args.square is not None:
        rows = scan_square_systems(args.square, budget=budget, workers=workers)
        if args.format == "json":
            return _json({"kind": "scan", "family": "square", "rows": [
                {"n": r.n, "minimal": r.minimal, "prime_power": r.prime_power,
                 "consistent": r.consistent} for r in rows]})
        if args.format == "pretty":
            lines = [f"n={r.n}: minimal={_bool(r.minimal)}"
                     f" prime_power={_bool(r.prime_power)}"
                     f" consistent={_bool(r.consistent)}" for r in rows]
            return "\n".join(lines) + "\n"
        return _csv(["n", "minimal", "prime_power", "consistent"],
                    [[r.n, _bool(r.minimal), _bool(r.prime_power),
                      _bool(r.consistent)] for r in rows])
    rows = scan_ternary_systems(args.ternary, budget=budget, workers=workers)
    flagged = [r for r in rows if r.missing_count]
    for r in flagged:
        print(f"FLAGGED: non-minimal ternary system d={r.d} (0,{r.n},{r.m})"
              f" with {r.missing_count} missing monomials", file=sys.stderr)
    if args.format == "json":
        return _json({"kind": "scan", "family": "ternary", "rows": [
            {"d": r.d, "n": r.n, "m": r.m, "minimal": r.minimal,
             "missing_count": r.missing_count} for r in rows]})
    if args.format == "pretty":
        lines = [f"d={r.d} (0,{r.n},{r.m}): minimal={_bool(r.minimal)}"
                 f" missing={r.missing_count}" for r in rows]
        return "\n".join(lines) + "\n"
    return _csv(["d", "n", "m", "minimal", "missing_count"],
                [[r.d, r.n, r.m, _bool(r.minimal), r.missing_count]
                 for r in rows])


_COMMANDS = {
    "det": _cmd_det,
    "per": _cmd_per,
    "count": _cmd_count,
    "coeff": _cmd_coeff,
    "witness": _cmd_witness,
    "gt": _cmd_gt,
    "scan": _cmd_scan,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; map onto our invalid-input code
        code = exc.code or 0
        return EXIT_INVALID if code else EXIT_OK
    try:
        text = _COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidInput as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CirculantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
