"""Distinct-eigenvalue perturbation bounds and their corollaries.

For C = A + B the classical estimate bounds |Lambda(C)| by
(rank(B)+1)|Lambda(A)| + d(A); the improved estimate subtracts d(C).  This
module evaluates both exactly, splits |Lambda(C)| into eigenvalues shared
with A and new ones, checks the geometric-multiplicity drop bound
m_g(C, lam) >= m_g(A, lam) - rank(B) at every Gaussian-rational eigenvalue
of A, and evaluates the Hermitian/skew-Hermitian splitting bounds including
their shift-parameter infima.

Failures of any proved inequality raise ``VerificationViolation`` -- they
can only mean a bug in this package, so they are never reported quietly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from gmpy2 import mpq

from .errors import InputError, VerificationViolation
from .eigenstructure import (
    EigenstructureSummary,
    ExactMatrix,
    char_poly,
    geometric_multiplicity_at,
    invariant_factors,
    rank,
    summarize,
)
from .exactpoly import (
    GaussianRational,
    Poly,
    ScalarLike,
    as_gaussian,
    poly_gcd,
    squarefree_decompose,
    squarefree_part,
)
from .rootfind import gaussian_rational_roots


@dataclass(frozen=True)
class MgDropCheck:
    """m_g(C, lam) >= m_g(A, lam) - rank(B) at one rational eigenvalue of A."""

    eigenvalue: GaussianRational
    mg_a: int
    mg_c: int
    satisfied: bool


@dataclass(frozen=True)
class BoundReport:
    """All bound values and diagnostics for one (A, B, C=A+B) triple."""

    n: int
    rank_b: int
    summary_a: EigenstructureSummary
    summary_c: EigenstructureSummary
    farrell_bound: int
    improved_bound: int
    actual_distinct_c: int
    slack: int
    s1_size: int
    s2_size: int
    mg_drop_checks: tuple[MgDropCheck, ...]


def bound_report(a: ExactMatrix, b: ExactMatrix) -> BoundReport:
    """Evaluate both bounds for C = A + B and verify every proved inequality.

    Raises VerificationViolation (never returns) if the improved bound, the
    |Lambda(C)| + d(C) <= n relation, the empty-intersection consequence, or
    any geometric-multiplicity drop check fails; all of those are theorems,
    so a failure is an implementation bug.  The violation carries A, B, C
    so callers can serialize a reproduction bundle.
    """
    a._require_square("bound_report")
    b._require_square("bound_report")
    if a.rows != b.rows:
        raise InputError(f"dimension mismatch: A is {a.rows}x{a.rows}, B is {b.rows}x{b.rows}")
    c = a + b
    summary_a = summarize(a)
    summary_c = summarize(c)
    rank_b = rank(b)
    n = a.rows
    farrell = (rank_b + 1) * summary_a.num_distinct + summary_a.defectivity
    improved = farrell - summary_c.defectivity
    actual = summary_c.num_distinct
    s1 = poly_gcd(
        summary_a.multiplicity_profile.squarefree_product(),
        summary_c.multiplicity_profile.squarefree_product(),
    ).degree()
    s2 = actual - s1

    checks = []
    for lam in gaussian_rational_roots(summary_a.char_poly):
        mg_a = geometric_multiplicity_at(a, lam)
        mg_c = geometric_multiplicity_at(c, lam)
        checks.append(MgDropCheck(lam, mg_a, mg_c, mg_c >= mg_a - rank_b))

    details = {"A": a, "B": b, "C": c}
    if actual > improved:
        raise VerificationViolation(
            f"improved bound falsified: |Lambda(C)| = {actual} > {improved}", details
        )
    if actual + summary_c.defectivity > n:
        raise VerificationViolation(
            f"|Lambda(C)| + d(C) = {actual + summary_c.defectivity} exceeds n = {n}", details
        )
    if s1 == 0 and farrell <= n:
        raise VerificationViolation(
            f"disjoint spectra but (rank(B)+1)|Lambda(A)|+d(A) = {farrell} <= n = {n}", details
        )
    bad = [ch for ch in checks if not ch.satisfied]
    if bad:
        raise VerificationViolation(
            f"geometric multiplicity drop bound failed at {bad[0].eigenvalue}", details
        )
    return BoundReport(
        n=n,
        rank_b=rank_b,
        summary_a=summary_a,
        summary_c=summary_c,
        farrell_bound=farrell,
        improved_bound=improved,
        actual_distinct_c=actual,
        slack=improved - actual,
        s1_size=s1,
        s2_size=s2,
        mg_drop_checks=tuple(checks),
    )


class Corollary41Result(NamedTuple):
    lhs: int
    rhs: int
    holds: bool


def corollary41_check(report: BoundReport) -> Corollary41Result:
    """Derogatory index lower bound: I(C) >= I(A) - rank(B)*|Lambda(A)|."""
    lhs = report.summary_c.derogatory_index
    rhs = report.summary_a.derogatory_index - report.rank_b * report.summary_a.num_distinct
    return Corollary41Result(lhs, rhs, lhs >= rhs)


class Corollary42Result(NamedTuple):
    bound: int
    actual: int
    case: str


def corollary42_check(a: ExactMatrix, b: ExactMatrix) -> Corollary42Result:
    """Rank-one update of a diagonalizable matrix: |Lambda(C)| <= 2|Lambda(A)|,
    sharpened to 2|Lambda(A)| - 1 when C is not diagonalizable.

    The hypotheses d(A) = 0 and rank(B) = 1 are hard preconditions.
    """
    a._require_square("corollary42_check")
    b._require_square("corollary42_check")
    if a.rows != b.rows:
        raise InputError(f"dimension mismatch: {a.rows} vs {b.rows}")
    summary_a = summarize(a)
    if summary_a.defectivity != 0:
        raise InputError(
            f"the rank-one-update corollary requires a diagonalizable A, but d(A) = {summary_a.defectivity}"
        )
    rank_b = rank(b)
    if rank_b != 1:
        raise InputError(f"the rank-one-update corollary requires rank(B) = 1, got {rank_b}")
    summary_c = summarize(a + b)
    if summary_c.defectivity == 0:
        case, bound = "diagonalizable", 2 * summary_a.num_distinct
    else:
        case, bound = "not-diagonalizable", 2 * summary_a.num_distinct - 1
    return Corollary42Result(bound, summary_c.num_distinct, case)


class Corollary43Result(NamedTuple):
    lower: mpq
    upper: int
    value: int
    holds: bool


def corollary43_check(a: ExactMatrix, b: ExactMatrix) -> Corollary43Result:
    """When C = A + B is nonderogatory:
    (n - d(A)) / (rank(B)+1) <= |Lambda(A)| <= n - d(A)."""
    a._require_square("corollary43_check")
    b._require_square("corollary43_check")
    if a.rows != b.rows:
        raise InputError(f"dimension mismatch: {a.rows} vs {b.rows}")
    summary_c = summarize(a + b)
    if summary_c.derogatory_index != 0:
        raise InputError(
            f"the nonderogatory-window corollary requires a nonderogatory C, but I(C) = {summary_c.derogatory_index}"
        )
    summary_a = summarize(a)
    n = a.rows
    lower = mpq(n - summary_a.defectivity, rank(b) + 1)
    upper = n - summary_a.defectivity
    value = summary_a.num_distinct
    return Corollary43Result(lower, upper, value, lower <= value <= upper)


def hermitian_split(a: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """(H, S) with H = (A + A*)/2 Hermitian, S = (A - A*)/2 skew-Hermitian."""
    a._require_square("hermitian_split")
    star = a.conjugate_transpose()
    half = mpq(1, 2)
    h = (a + star) * half
    s = (a - star) * half
    if h + s != a or h != h.conjugate_transpose() or s != -(s.conjugate_transpose()):
        raise AssertionError("Hermitian/skew-Hermitian split failed self-check")
    return h, s


@dataclass(frozen=True)
class AlphaCandidate:
    """One candidate shift for the parametrized splitting A = (H+aI) + (S-aI).

    ``alpha`` is the concrete shift when it is Gaussian rational; ``None``
    marks the class of irrational roots of ``factor`` (they all produce the
    same bound values, so they never need to be evaluated).  ``multiplicity``
    is the algebraic multiplicity class driving the rank drop (0 for the
    unshifted candidate, whose ranks are computed directly).
    """

    alpha: GaussianRational | None
    source: str  # "zero" | "hermitian" | "skew"
    multiplicity: int
    factor: Poly | None
    min_value: int
    product_value: int


@dataclass(frozen=True)
class SplitReport:
    """Splitting-based upper bounds on |Lambda(A)|."""

    h_part: ExactMatrix
    s_part: ExactMatrix
    rank_h: int
    rank_s: int
    distinct_h: int
    distinct_s: int
    cor44_bound: int
    rem45_bound: int
    rem46_min_bound: int
    rem46_product_bound: int
    chosen_alpha_candidates: tuple[AlphaCandidate, ...]


def alpha_objective(
    h: ExactMatrix, s: ExactMatrix, defect_a: int, alpha: ScalarLike
) -> tuple[int, int]:
    """Directly evaluate both shift objectives at one rational alpha.

    Returns (min-form value, product-form value) for the splitting
    A = (H + alpha I) + (S - alpha I), computed from scratch with ranks and
    squarefree degrees; used to cross-validate the candidate-set minimum.
    """
    alpha = as_gaussian(alpha)
    h_shift = h.add_scalar(alpha)
    s_shift = s.add_scalar(-alpha)
    rank_h, rank_s = rank(h_shift), rank(s_shift)
    distinct_h = squarefree_part(char_poly(h_shift)).degree()
    distinct_s = squarefree_part(char_poly(s_shift)).degree()
    min_value = min((rank_h + 1) * distinct_s, (rank_s + 1) * distinct_h) - defect_a
    product_value = (rank_h + 1) * (rank_s + 1) - defect_a
    return min_value, product_value


def split_bounds(a: ExactMatrix) -> SplitReport:
    """Evaluate the splitting bounds and their shift-parameter infima.

    The infimum over all complex shifts is attained on a finite candidate
    set: the unshifted splitting plus, for each eigenvalue of H or S, the
    shift that cancels it.  Shifting moves spectra rigidly, so the distinct
    counts never change and only one rank can drop below n at a nonzero
    candidate (H has a real spectrum, S a purely imaginary one).  The drop
    equals the eigenvalue's algebraic multiplicity, which is just the
    multiplicity class in the squarefree decomposition -- so irrational
    candidates are scored without ever being evaluated.
    """
    n = a._require_square("split_bounds")
    h, s = hermitian_split(a)
    summary_a = summarize(a)
    d_a = summary_a.defectivity
    rank_h, rank_s = rank(h), rank(s)
    profile_h = squarefree_decompose(char_poly(h))
    profile_s = squarefree_decompose(char_poly(s))
    distinct_h = profile_h.distinct_root_count()
    distinct_s = profile_s.distinct_root_count()

    candidates = [
        AlphaCandidate(
            alpha=GaussianRational(0),
            source="zero",
            multiplicity=0,
            factor=None,
            min_value=min((rank_h + 1) * distinct_s, (rank_s + 1) * distinct_h) - d_a,
            product_value=(rank_h + 1) * (rank_s + 1) - d_a,
        )
    ]

    def class_candidates(profile, source: str):
        x = Poly.x()
        for g, k in profile.parts:
            if source == "hermitian":
                min_value = min((n - k + 1) * distinct_s, (n + 1) * distinct_h) - d_a
            else:
                min_value = min((n + 1) * distinct_s, (n - k + 1) * distinct_h) - d_a
            product_value = (n - k + 1) * (n + 1) - d_a
            residue = g
            for root in gaussian_rational_roots(g):
                residue = residue // Poly((-root, 1))
                if root.is_zero():
                    continue  # the zero shift is already listed
                alpha = -root if source == "hermitian" else root
                candidates.append(
                    AlphaCandidate(alpha, source, k, g, min_value, product_value)
                )
            if residue.degree() >= 1:
                candidates.append(
                    AlphaCandidate(None, source, k, g, min_value, product_value)
                )

    class_candidates(profile_h, "hermitian")
    class_candidates(profile_s, "skew")

    cor44 = candidates[0].min_value
    rem45 = candidates[0].product_value
    rem46_min = min(c.min_value for c in candidates)
    rem46_product = min(c.product_value for c in candidates)

    actual = summary_a.num_distinct
    ordered = (
        actual <= rem46_min <= cor44 <= rem45
        and actual <= rem46_product <= rem45
    )
    if not ordered:
        raise VerificationViolation(
            "splitting bound ordering failed: "
            f"|Lambda(A)|={actual}, rem46_min={rem46_min}, cor44={cor44}, "
            f"rem45={rem45}, rem46_product={rem46_product}",
            {"A": a},
        )
    return SplitReport(
        h_part=h,
        s_part=s,
        rank_h=rank_h,
        rank_s=rank_s,
        distinct_h=distinct_h,
        distinct_s=distinct_s,
        cor44_bound=cor44,
        rem45_bound=rem45,
        rem46_min_bound=rem46_min,
        rem46_product_bound=rem46_product,
        chosen_alpha_candidates=tuple(candidates),
    )


def krylov_degree_bound(matrix: ExactMatrix) -> int:
    """Degree of the minimal polynomial: the exact cap on Krylov iterations.

    Equals |Lambda(M)| exactly when M is diagonalizable, and exceeds it
    otherwise.
    """
    matrix._require_square("krylov_degree_bound")
    return invariant_factors(matrix).minimal_polynomial.degree()
