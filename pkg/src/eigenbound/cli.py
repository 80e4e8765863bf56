"""Command-line interface.

Subcommands::

    analyze <file> [--format text|json]        eigenstructure invariants
    bound --a <file> --b <file> [--format ..]  both bounds for C = A + B
    split <file> [--format ..]                 Hermitian/skew splitting bounds
    fuzz --n N --rank R --trials T --seed S    seeded verification campaign
    examples [--n N]                           golden example suites

Exit codes: 0 = success and every verification passed, 1 = a proved
inequality failed (a bug; a reproduction bundle path is printed),
2 = input or usage error.  JSON bodies are byte-stable for identical
inputs; elapsed time goes to a sidecar line on stderr, never into the JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import InputError, ParseError, VerificationViolation
from .eigenstructure import ExactMatrix, summarize
from .bounds import (
    BoundReport,
    SplitReport,
    bound_report,
    corollary41_check,
    corollary42_check,
    corollary43_check,
    split_bounds,
)
from .fuzzharness import (
    ExampleSuiteResult,
    FuzzConfig,
    FuzzReport,
    worked_example_suite,
    run_fuzz,
)
from .matio import load_matrix, save_matrix


# -- report documents --------------------------------------------------------


def analyze_document(summary) -> dict:
    profile = [
        {"factor": str(g), "multiplicity": k}
        for g, k in summary.multiplicity_profile.parts
    ]
    return {
        "n": summary.n,
        "distinct": summary.num_distinct,
        "defectivity": summary.defectivity,
        "derogatory_index": summary.derogatory_index,
        "diagonalizable": summary.is_diagonalizable,
        "nonderogatory": summary.is_nonderogatory,
        "char_poly": str(summary.char_poly),
        "min_poly": str(summary.min_poly),
        "krylov_degree_bound": summary.min_poly.degree(),
        "invariant_factors": [str(f) for f in summary.invariant_factors.factors],
        "multiplicity_profile": profile,
    }


def _check(name: str, applicable: bool, holds: bool, detail: str) -> dict:
    return {"name": name, "applicable": applicable, "holds": holds, "detail": detail}


def bound_checks(report: BoundReport, a: ExactMatrix, b: ExactMatrix) -> list[dict]:
    """Corollary and consequence checks for one report.

    Proved inequalities that come back false raise VerificationViolation;
    checks whose hypotheses do not hold are reported as not applicable.
    """
    checks = [
        _check(
            "improved-bound",
            True,
            report.actual_distinct_c <= report.improved_bound,
            f"|Lambda(C)| = {report.actual_distinct_c} <= {report.improved_bound}",
        ),
        _check(
            "distinct-plus-defectivity",
            True,
            report.actual_distinct_c + report.summary_c.defectivity <= report.n,
            f"{report.actual_distinct_c} + {report.summary_c.defectivity} <= {report.n}",
        ),
        _check(
            "improved-vs-farrell",
            True,
            (report.improved_bound < report.farrell_bound)
            == (report.summary_c.defectivity >= 1),
            f"improved {report.improved_bound} undercuts farrell "
            f"{report.farrell_bound} iff d(C) = {report.summary_c.defectivity} >= 1",
        ),
    ]
    for mg in report.mg_drop_checks:
        checks.append(
            _check(
                f"mg-drop({mg.eigenvalue})",
                True,
                mg.satisfied,
                f"m_g(C) = {mg.mg_c} >= m_g(A) - rank(B) = {mg.mg_a - report.rank_b}",
            )
        )
    cor41 = corollary41_check(report)
    checks.append(
        _check(
            "corollary-derogatory-index",
            True,
            cor41.holds,
            f"I(C) = {cor41.lhs} >= I(A) - rank(B)|Lambda(A)| = {cor41.rhs}",
        )
    )
    if report.summary_a.defectivity == 0 and report.rank_b == 1:
        cor42 = corollary42_check(a, b)
        checks.append(
            _check(
                "corollary-rank-one-update",
                True,
                cor42.actual <= cor42.bound,
                f"C {cor42.case}: |Lambda(C)| = {cor42.actual} <= {cor42.bound}",
            )
        )
    else:
        checks.append(
            _check(
                "corollary-rank-one-update",
                False,
                True,
                f"needs d(A) = 0 and rank(B) = 1; have d(A) = "
                f"{report.summary_a.defectivity}, rank(B) = {report.rank_b}",
            )
        )
    if report.summary_c.derogatory_index == 0:
        cor43 = corollary43_check(a, b)
        checks.append(
            _check(
                "corollary-nonderogatory-window",
                True,
                cor43.holds,
                f"{cor43.lower} <= |Lambda(A)| = {cor43.value} <= {cor43.upper}",
            )
        )
    else:
        checks.append(
            _check(
                "corollary-nonderogatory-window",
                False,
                True,
                f"needs a nonderogatory C; have I(C) = "
                f"{report.summary_c.derogatory_index}",
            )
        )
    failed = [c for c in checks if c["applicable"] and not c["holds"]]
    if failed:
        raise VerificationViolation(
            f"check {failed[0]['name']} failed: {failed[0]['detail']}",
            {"A": a, "B": b, "C": a + b},
        )
    return checks


def bound_document(report: BoundReport, checks: list[dict]) -> dict:
    return {
        "n": report.n,
        "rank_b": report.rank_b,
        "distinct_a": report.summary_a.num_distinct,
        "defectivity_a": report.summary_a.defectivity,
        "derogatory_a": report.summary_a.derogatory_index,
        "distinct_c": report.summary_c.num_distinct,
        "defectivity_c": report.summary_c.defectivity,
        "derogatory_c": report.summary_c.derogatory_index,
        "farrell_bound": report.farrell_bound,
        "improved_bound": report.improved_bound,
        "actual_distinct": report.actual_distinct_c,
        "slack": report.slack,
        "s1_size": report.s1_size,
        "s2_size": report.s2_size,
        "checks": checks,
    }


def split_document(report: SplitReport, summary_a) -> dict:
    return {
        "n": summary_a.n,
        "distinct_a": summary_a.num_distinct,
        "defectivity_a": summary_a.defectivity,
        "rank_h": report.rank_h,
        "rank_s": report.rank_s,
        "distinct_h": report.distinct_h,
        "distinct_s": report.distinct_s,
        "cor44_bound": report.cor44_bound,
        "rem45_bound": report.rem45_bound,
        "rem46_min_bound": report.rem46_min_bound,
        "rem46_product_bound": report.rem46_product_bound,
        "alpha_candidates": [
            {
                "alpha": None if c.alpha is None else str(c.alpha),
                "source": c.source,
                "multiplicity": c.multiplicity,
                "factor": None if c.factor is None else str(c.factor),
                "min_value": c.min_value,
                "product_value": c.product_value,
            }
            for c in report.chosen_alpha_candidates
        ],
    }


def fuzz_document(config: FuzzConfig, report: FuzzReport) -> dict:
    return {
        "config": {
            "n_min": config.n[0],
            "n_max": config.n[1],
            "rank_min": config.rank[0],
            "rank_max": config.rank[1],
            "trials": config.trials,
            "seed": config.seed,
            "max_entry": config.max_entry,
            "unimodular_ops": config.unimodular_ops,
        },
        "trials_run": report.trials_run,
        "violations": report.violations,
        "tight_count": report.tight_count,
        "slack_histogram": {str(k): v for k, v in sorted(report.slack_histogram.items())},
        "min_slack": report.min_slack,
        "max_slack": report.max_slack,
    }


def examples_document(result: ExampleSuiteResult, worked_checks: list[dict]) -> dict:
    return {
        "n": result.n,
        "family": [
            {
                "r": row.r,
                "farrell_bound": row.farrell_bound,
                "improved_bound": row.improved_bound,
                "defectivity_c": row.defectivity_c,
                "actual_distinct": row.actual_distinct,
            }
            for row in result.family_rows
        ],
        "worked_example": bound_document(result.worked_example, worked_checks),
    }


def _emit(doc: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(text_lines))


# -- subcommand handlers ------------------------------------------------------


def _cmd_analyze(args) -> int:
    summary = summarize(load_matrix(args.file))
    doc = analyze_document(summary)
    profile = " ".join(
        f"({p['factor']})^{p['multiplicity']}" for p in doc["multiplicity_profile"]
    )
    lines = [
        f"n: {doc['n']}",
        f"distinct eigenvalues: {doc['distinct']}",
        f"defectivity: {doc['defectivity']}",
        f"derogatory index: {doc['derogatory_index']}",
        f"diagonalizable: {'yes' if doc['diagonalizable'] else 'no'}",
        f"nonderogatory: {'yes' if doc['nonderogatory'] else 'no'}",
        f"char poly: {doc['char_poly']}",
        f"min poly: {doc['min_poly']}",
        f"krylov degree bound: {doc['krylov_degree_bound']}",
        f"invariant factors: {', '.join(doc['invariant_factors'])}",
        f"multiplicity profile: {profile}",
    ]
    _emit(doc, lines, args.format)
    return 0


def _bound_text(doc: dict) -> list[str]:
    lines = [
        f"n: {doc['n']}   rank(B): {doc['rank_b']}",
        f"A: distinct {doc['distinct_a']}, defectivity {doc['defectivity_a']}, "
        f"derogatory {doc['derogatory_a']}",
        f"C: distinct {doc['distinct_c']}, defectivity {doc['defectivity_c']}, "
        f"derogatory {doc['derogatory_c']}",
        f"farrell bound: {doc['farrell_bound']}",
        f"improved bound: {doc['improved_bound']}",
        f"actual distinct: {doc['actual_distinct']}   slack: {doc['slack']}",
        f"shared eigenvalues s1: {doc['s1_size']}   new eigenvalues s2: {doc['s2_size']}",
    ]
    for check in doc["checks"]:
        status = "PASS" if check["applicable"] else "SKIP"
        lines.append(f"  [{status}] {check['name']}: {check['detail']}")
    return lines


def _cmd_bound(args) -> int:
    a = load_matrix(args.a)
    b = load_matrix(args.b)
    report = bound_report(a, b)
    checks = bound_checks(report, a, b)
    doc = bound_document(report, checks)
    _emit(doc, _bound_text(doc), args.format)
    return 0


def _cmd_split(args) -> int:
    a = load_matrix(args.file)
    report = split_bounds(a)
    doc = split_document(report, summarize(a))
    lines = [
        f"n: {doc['n']}   distinct(A): {doc['distinct_a']}   "
        f"defectivity(A): {doc['defectivity_a']}",
        f"hermitian part: rank {doc['rank_h']}, distinct {doc['distinct_h']}",
        f"skew part: rank {doc['rank_s']}, distinct {doc['distinct_s']}",
        f"cor44 bound: {doc['cor44_bound']}",
        f"rem45 bound: {doc['rem45_bound']}",
        f"rem46 min bound: {doc['rem46_min_bound']}",
        f"rem46 product bound: {doc['rem46_product_bound']}",
        "shift candidates:",
    ]
    for cand in doc["alpha_candidates"]:
        alpha = cand["alpha"] if cand["alpha"] is not None else (
            f"irrational roots of {cand['factor']}"
        )
        lines.append(
            f"  alpha = {alpha} ({cand['source']}, multiplicity "
            f"{cand['multiplicity']}): min {cand['min_value']}, "
            f"product {cand['product_value']}"
        )
    _emit(doc, lines, args.format)
    return 0


def _cmd_fuzz(args) -> int:
    config = FuzzConfig(
        n=args.n,
        rank=args.rank,
        trials=args.trials,
        seed=args.seed,
        max_entry=args.max_entry,
        unimodular_ops=args.unimodular_ops,
    )
    report = run_fuzz(config, bundle_dir=args.bundle_dir)
    doc = fuzz_document(config, report)
    histogram = " ".join(f"{k}:{v}" for k, v in doc["slack_histogram"].items())
    lines = [
        f"trials: {doc['trials_run']}   violations: {doc['violations']}   "
        f"tight: {doc['tight_count']}",
        f"slack range: [{doc['min_slack']}, {doc['max_slack']}]",
        f"slack histogram: {histogram}",
    ]
    _emit(doc, lines, args.format)
    print(f"elapsed: {report.elapsed:.2f}s", file=sys.stderr)
    if args.plot:
        from .plotting import render_slack_histogram

        print(f"figure: {render_slack_histogram(report, args.plot)}", file=sys.stderr)
    return 0


def _cmd_examples(args) -> int:
    result = worked_example_suite(args.n)
    a, b = _worked_matrices()
    checks = bound_checks(result.worked_example, a, b)
    doc = examples_document(result, checks)
    lines = [f"jordan-block family, n = {doc['n']}:",
             "  r  farrell  improved  d(C)  actual"]
    for row in doc["family"]:
        lines.append(
            f"  {row['r']:<2} {row['farrell_bound']:<8} {row['improved_bound']:<9} "
            f"{row['defectivity_c']:<5} {row['actual_distinct']}"
        )
    lines.append("worked 5x5 example:")
    lines.extend("  " + line for line in _bound_text(doc["worked_example"]))
    lines.append("all example assertions passed")
    _emit(doc, lines, args.format)
    if args.plot:
        from .plotting import render_bound_family

        print(f"figure: {render_bound_family(result, args.plot)}", file=sys.stderr)
    return 0


def _worked_matrices():
    from .fuzzharness import worked_example_matrices

    return worked_example_matrices()


def _int_or_range(text: str):
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return (int(lo), int(hi))
        return int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected an integer or LO..HI range, got {text!r}"
        ) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eigenbound",
        description="Exact Jordan-structure invariants and distinct-eigenvalue "
        "perturbation bounds over the Gaussian rationals.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("analyze", help="eigenstructure invariants of one matrix")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("bound", help="perturbation bounds for C = A + B")
    p.add_argument("--a", required=True, metavar="FILE")
    p.add_argument("--b", required=True, metavar="FILE")
    add_format(p)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("split", help="Hermitian/skew-Hermitian splitting bounds")
    p.add_argument("file")
    add_format(p)
    p.set_defaults(handler=_cmd_split)

    p = sub.add_parser("fuzz", help="seeded mass-verification campaign")
    p.add_argument("--n", required=True, type=_int_or_range, metavar="N|LO..HI")
    p.add_argument("--rank", required=True, type=_int_or_range, metavar="R|LO..HI")
    p.add_argument("--trials", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--max-entry", type=int, default=3)
    p.add_argument("--unimodular-ops", type=int, default=None)
    p.add_argument("--bundle-dir", default=".")
    p.add_argument("--plot", metavar="FILE", help="write a slack histogram figure")
    add_format(p)
    p.set_defaults(handler=_cmd_fuzz)

    p = sub.add_parser("examples", help="golden worked-example suites")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--plot", metavar="FILE", help="write a bound-family figure")
    add_format(p)
    p.set_defaults(handler=_cmd_examples)

    return parser


def _report_violation(exc: VerificationViolation) -> int:
    bundle = exc.details.get("bundle")
    if bundle is None and {"A", "B"} <= exc.details.keys():
        bundle = "violation-bundle"
        os.makedirs(bundle, exist_ok=True)
        for name in ("A", "B", "C"):
            if name in exc.details:
                save_matrix(os.path.join(bundle, f"{name}.mat"), exc.details[name])
    print(f"verification violation: {exc}", file=sys.stderr)
    if bundle is not None:
        print(f"reproduction bundle: {bundle}", file=sys.stderr)
    return 1


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationViolation as exc:
        return _report_violation(exc)


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
