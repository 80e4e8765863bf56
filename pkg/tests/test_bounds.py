"""Perturbation bounds, corollaries, and splitting estimates."""

import random

import pytest
from gmpy2 import mpq

from eigenbound.errors import InputError
from eigenbound.bounds import (
    alpha_objective,
    bound_report,
    corollary41_check,
    corollary42_check,
    corollary43_check,
    hermitian_split,
    krylov_degree_bound,
    split_bounds,
)
from eigenbound.eigenstructure import ExactMatrix, rank, summarize
from eigenbound.exactpoly import GaussianRational, Poly
from eigenbound.fuzzharness import (
    JordanSpec,
    SplitMix64,
    build_jordan,
    jordan_block_matrix,
    random_jordan_spec,
    random_unimodular_pair,
    staircase_perturbation,
    worked_example_matrices,
)

A5, B5 = worked_example_matrices()


def unit_update(n: int, i: int, j: int) -> ExactMatrix:
    """e_i e_j^T."""
    rows = [[GaussianRational(0)] * n for _ in range(n)]
    rows[i][j] = GaussianRational(1)
    return ExactMatrix.from_rows(rows)


def rand_matrix(rng: random.Random, n: int, complex_entries: bool = True) -> ExactMatrix:
    def entry():
        re = mpq(rng.randint(-4, 4), rng.randint(1, 2))
        im = mpq(rng.randint(-4, 4), rng.randint(1, 2)) if complex_entries else 0
        return GaussianRational(re, im)

    return ExactMatrix(n, n, [entry() for _ in range(n * n)])


class TestBoundReport:
    def test_worked_example_numbers(self):
        rep = bound_report(A5, B5)
        assert rep.farrell_bound == 4
        assert rep.improved_bound == 3
        assert rep.actual_distinct_c == 3
        assert rep.slack == 0
        assert (rep.s1_size, rep.s2_size) == (1, 2)
        assert rep.rank_b == 1

    def test_mg_checks_cover_rational_spectrum(self):
        rep = bound_report(A5, B5)
        assert [c.eigenvalue for c in rep.mg_drop_checks] == [GaussianRational(1)]
        check = rep.mg_drop_checks[0]
        assert (check.mg_a, check.mg_c, check.satisfied) == (3, 2, True)

    def test_zero_perturbation_is_tight(self):
        for matrix in (A5, jordan_block_matrix(6), ExactMatrix.identity(4)):
            n = matrix.rows
            rep = bound_report(matrix, ExactMatrix.zeros(n, n))
            s = summarize(matrix)
            assert rep.farrell_bound == s.num_distinct + s.defectivity
            assert rep.improved_bound == s.num_distinct
            assert rep.actual_distinct_c == s.num_distinct
            assert rep.slack == 0

    def test_jordan_family_bounds(self):
        n = 10
        a = jordan_block_matrix(n)
        for r in range(1, n):
            rep = bound_report(a, staircase_perturbation(n, r))
            assert rep.farrell_bound == n + r
            assert rep.improved_bound == 2 * r + 1
            assert rep.summary_c.defectivity == n - 1 - r
            assert rep.actual_distinct_c == r + 1  # observed, not asserted by theory

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            bound_report(A5, ExactMatrix.identity(4))

    def test_disjoint_spectra_forces_trivial_farrell(self):
        # shifting a Jordan block by I moves the whole spectrum: s1 = 0,
        # and then the baseline bound must exceed n
        n = 4
        a = jordan_block_matrix(n)
        rep = bound_report(a, ExactMatrix.identity(n))
        assert rep.s1_size == 0
        assert rep.s2_size == rep.actual_distinct_c == 1
        assert rep.farrell_bound > n

    def test_invariant_relationships_on_random_instances(self):
        for t in range(25):
            stream = SplitMix64(31_000 + t)
            n = stream.randint(2, 6)
            spec = random_jordan_spec(n, stream)
            p, p_inv = random_unimodular_pair(n, 2 * n, stream)
            a = p * build_jordan(spec) * p_inv
            b = ExactMatrix(
                n, n, [GaussianRational(stream.randint(-2, 2)) for _ in range(n * n)]
            )
            rep = bound_report(a, b)
            assert rep.farrell_bound == (rep.rank_b + 1) * rep.summary_a.num_distinct + rep.summary_a.defectivity
            assert rep.improved_bound == rep.farrell_bound - rep.summary_c.defectivity
            assert rep.s1_size + rep.s2_size == rep.actual_distinct_c
            assert 0 <= rep.slack
            assert rep.actual_distinct_c + rep.summary_c.defectivity <= n
            assert (rep.improved_bound < rep.farrell_bound) == (rep.summary_c.defectivity >= 1)


class TestCorollary41:
    def test_worked_example_tight(self):
        res = corollary41_check(bound_report(A5, B5))
        assert res == (1, 1, True)

    def test_zero_perturbation(self):
        rep = bound_report(A5, ExactMatrix.zeros(5, 5))
        res = corollary41_check(rep)
        assert res.lhs == res.rhs == summarize(A5).derogatory_index

    def test_scalar_plus_rank_one_brute_force(self):
        # I(cI + B) >= n - 2 for any rank-one B, checked by direct summary
        rng = random.Random(123)
        for _ in range(10):
            n = rng.randint(3, 5)
            c = GaussianRational(rng.randint(-3, 3))
            a = ExactMatrix.identity(n) * c
            u = [GaussianRational(rng.randint(-3, 3)) for _ in range(n)]
            v = [GaussianRational(rng.randint(-3, 3)) for _ in range(n)]
            b = ExactMatrix(n, n, [x * y for x in u for y in v])
            if rank(b) != 1:
                continue
            rep = bound_report(a, b)
            res = corollary41_check(rep)
            assert res.holds
            assert res.rhs == n - 2
            assert rep.summary_c.derogatory_index >= n - 2


class TestCorollary42:
    def test_preconditions(self):
        with pytest.raises(InputError):
            corollary42_check(A5, B5)  # d(A) = 2
        with pytest.raises(InputError):
            corollary42_check(ExactMatrix.identity(3), ExactMatrix.identity(3))  # rank 3

    def test_diagonal_plus_unit_update(self):
        a = ExactMatrix.from_rows([[1, 0], [0, 2]])
        res = corollary42_check(a, unit_update(2, 0, 1))
        # C is triangular with distinct diagonal: diagonalizable, two eigenvalues
        assert res == (4, 2, "diagonalizable")

    def test_nilpotent_update_of_zero(self):
        n = 4
        res = corollary42_check(ExactMatrix.zeros(n, n), unit_update(n, 0, 1))
        assert res == (1, 1, "not-diagonalizable")

    def test_identity_plus_projector(self):
        n = 4
        res = corollary42_check(ExactMatrix.identity(n), unit_update(n, 0, 0))
        assert res == (2, 2, "diagonalizable")


class TestCorollary43:
    def test_companion_no_perturbation(self):
        # companion of (x-1)(x-2)(x-3); nonderogatory, 3 distinct eigenvalues
        p = Poly.from_roots([GaussianRational(1), GaussianRational(2), GaussianRational(3)])
        n = p.degree()
        rows = [[GaussianRational(0)] * n for _ in range(n)]
        for i in range(n):
            rows[i][n - 1] = -p.coeffs[i]
            if i + 1 < n:
                rows[i + 1][i] = GaussianRational(1)
        comp = ExactMatrix.from_rows(rows)
        res = corollary43_check(comp, ExactMatrix.zeros(n, n))
        assert res == (mpq(3), 3, 3, True)

    def test_fully_perturbed_jordan_block(self):
        n = 6
        a = jordan_block_matrix(n)
        b = staircase_perturbation(n, n - 1)
        assert summarize(a + b).derogatory_index == 0
        res = corollary43_check(a, b)
        assert res.lower == mpq(1, n)
        assert res.value == 1
        assert res.holds

    def test_derogatory_c_rejected(self):
        with pytest.raises(InputError, match="I\\(C\\) = 2"):
            corollary43_check(ExactMatrix.identity(3), ExactMatrix.zeros(3, 3))


class TestHermitianSplit:
    def test_real_symmetric_passthrough(self):
        a = ExactMatrix.from_rows([[2, 1], [1, 5]])
        h, s = hermitian_split(a)
        assert h == a
        assert s == ExactMatrix.zeros(2, 2)

    def test_strict_upper(self):
        h, s = hermitian_split(ExactMatrix.from_rows([[0, 1], [0, 0]]))
        half = GaussianRational(mpq(1, 2))
        assert h == ExactMatrix.from_rows([[0, half], [half, 0]])
        assert s == ExactMatrix.from_rows([[0, half], [-half, 0]])

    def test_pure_imaginary_entry(self):
        a = ExactMatrix.from_rows([[GaussianRational(0, 1), 0], [0, 0]])
        h, s = hermitian_split(a)
        assert h == ExactMatrix.zeros(2, 2)
        assert s == a


class TestSplitBounds:
    def test_hermitian_input_is_tight(self):
        rng = random.Random(9)
        for _ in range(8):
            n = rng.randint(2, 4)
            m = rand_matrix(rng, n, complex_entries=False)
            a = m + m.transpose()  # real symmetric
            rep = split_bounds(a)
            assert rep.rank_s == 0
            assert rep.cor44_bound == summarize(a).num_distinct

    def test_scalar_matrix_shift_candidate_wins(self):
        c = GaussianRational(3, 2)
        rep = split_bounds(ExactMatrix.identity(3) * c)
        assert rep.rem46_min_bound == 1  # alpha = -Re(c) kills the Hermitian rank
        sources = {(cand.source, str(cand.alpha)) for cand in rep.chosen_alpha_candidates}
        assert ("hermitian", "-3") in sources

    def test_random_orderings(self):
        rng = random.Random(77)
        for _ in range(12):
            a = rand_matrix(rng, 4)
            rep = split_bounds(a)
            actual = summarize(a).num_distinct
            assert actual <= rep.rem46_min_bound <= rep.cor44_bound <= rep.rem45_bound
            assert actual <= rep.rem46_product_bound <= rep.rem45_bound

    def test_sampled_shifts_never_beat_candidates(self):
        rng = random.Random(88)
        for _ in range(5):
            a = rand_matrix(rng, 4)
            rep = split_bounds(a)
            h, s = hermitian_split(a)
            d_a = summarize(a).defectivity
            for _ in range(30):
                alpha = GaussianRational(
                    mpq(rng.randint(-8, 8), rng.randint(1, 4)),
                    mpq(rng.randint(-8, 8), rng.randint(1, 4)),
                )
                min_v, prod_v = alpha_objective(h, s, d_a, alpha)
                assert min_v >= rep.rem46_min_bound
                assert prod_v >= rep.rem46_product_bound

    def test_remark45_consequence(self):
        rng = random.Random(99)
        for _ in range(10):
            a = rand_matrix(rng, 3)
            rep = split_bounds(a)
            assert summarize(a).num_distinct <= rep.rem45_bound


class TestKrylovDegree:
    def test_worked_example(self):
        assert krylov_degree_bound(A5 + B5) == 4

    def test_identity(self):
        assert krylov_degree_bound(ExactMatrix.identity(6)) == 1

    def test_jordan_block(self):
        assert krylov_degree_bound(jordan_block_matrix(7)) == 7

    def test_equals_distinct_count_when_diagonalizable(self):
        a = ExactMatrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 2]])
        assert krylov_degree_bound(a) == summarize(a).num_distinct == 2
