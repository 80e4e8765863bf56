"""Deterministic generators and campaign machinery."""

import dataclasses

import pytest
from gmpy2 import mpq

from eigenbound.errors import InputError
from eigenbound.eigenstructure import ExactMatrix, rank, summarize
from eigenbound.exactpoly import GaussianRational
from eigenbound.bounds import bound_report
from eigenbound.fuzzharness import (
    EIGENVALUE_POOL,
    FuzzConfig,
    JordanSpec,
    SplitMix64,
    build_jordan,
    generate_trial,
    jordan_block_matrix,
    mix64,
    worked_example_suite,
    random_jordan_spec,
    random_low_rank,
    random_unimodular,
    random_unimodular_pair,
    run_fuzz,
    staircase_perturbation,
    trial_seed,
    worked_example_matrices,
    write_reproduction_bundle,
)
from eigenbound.matio import load_matrix


class TestSplitMix:
    def test_first_output_matches_documented_formula(self):
        seed = 123456789
        assert SplitMix64(seed).next_u64() == mix64(seed + 0x9E3779B97F4A7C15)

    def test_streams_decorrelated_across_trials(self):
        outs = {trial_seed(42, t) for t in range(1000)}
        assert len(outs) == 1000

    def test_randint_bounds(self):
        s = SplitMix64(5)
        values = {s.randint(2, 7) for _ in range(200)}
        assert values == {2, 3, 4, 5, 6, 7}
        with pytest.raises(InputError):
            s.randint(3, 2)


class TestJordanSpec:
    def test_ground_truth_fields(self):
        spec = JordanSpec((
            (GaussianRational(1), (3, 1, 1)),
            (GaussianRational(2), (2,)),
        ))
        assert spec.n == 7
        assert spec.num_distinct == 2
        assert spec.defectivity == 3
        assert spec.derogatory_index == 2

    def test_validation(self):
        with pytest.raises(InputError):
            JordanSpec(())
        with pytest.raises(InputError):
            JordanSpec(((GaussianRational(1), (0,)),))
        with pytest.raises(InputError):
            JordanSpec((
                (GaussianRational(1), (1,)),
                (GaussianRational(1), (2,)),
            ))

    def test_polynomials(self):
        spec = JordanSpec(((GaussianRational(1), (3, 1, 1)),))
        assert spec.char_poly().degree() == 5
        assert spec.min_poly().degree() == 3


class TestBuildJordan:
    def test_single_block_matches_family_builder(self):
        lam = GaussianRational(4)
        spec = JordanSpec(((lam, (6,)),))
        assert build_jordan(spec) == jordan_block_matrix(6, lam)

    def test_worked_example_structure(self):
        spec = JordanSpec(((GaussianRational(1), (3, 1, 1)),))
        s = summarize(build_jordan(spec))
        assert (s.num_distinct, s.defectivity, s.derogatory_index) == (1, 2, 2)

    def test_diagonal_spec(self):
        spec = JordanSpec((
            (GaussianRational(1), (1,)),
            (GaussianRational(2), (1,)),
            (GaussianRational(3), (1,)),
        ))
        m = build_jordan(spec)
        s = summarize(m)
        assert (s.defectivity, s.derogatory_index) == (0, 0)
        assert m == ExactMatrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 3]])


class TestRandomSpec:
    def test_totals_and_distinctness(self):
        for t in range(50):
            stream = SplitMix64(trial_seed(7, t))
            n = stream.randint(1, 9)
            spec = random_jordan_spec(n, stream)
            assert spec.n == n
            eigs = [lam for lam, _ in spec.blocks]
            assert len(set(eigs)) == len(eigs)
            assert all(lam in EIGENVALUE_POOL for lam in eigs)


class TestUnimodular:
    def test_zero_ops_is_identity(self):
        assert random_unimodular(4, 0, SplitMix64(1)) == ExactMatrix.identity(4)

    def test_pair_multiplies_to_identity(self):
        for t in range(10):
            p, p_inv = random_unimodular_pair(5, 15, SplitMix64(100 + t))
            assert p * p_inv == ExactMatrix.identity(5)
            assert all(e.re.denominator == 1 and e.im == 0 for e in p.entries)

    def test_conjugation_preserves_summary(self):
        for t in range(10):
            stream = SplitMix64(200 + t)
            spec = random_jordan_spec(5, stream)
            j = build_jordan(spec)
            p, p_inv = random_unimodular_pair(5, 15, stream)
            assert summarize(p * j * p_inv) == summarize(j)


class TestLowRank:
    def test_rank_postcondition(self):
        for t in range(20):
            stream = SplitMix64(300 + t)
            n = stream.randint(2, 7)
            r = stream.randint(1, max(1, n - 1))
            assert rank(random_low_rank(n, r, 3, stream)) == r

    def test_replicated_rows_rank_one(self):
        _, b = worked_example_matrices()
        assert rank(b) == 1

    def test_invalid_rank_rejected(self):
        with pytest.raises(InputError):
            random_low_rank(3, 0, 3, SplitMix64(1))
        with pytest.raises(InputError):
            random_low_rank(3, 4, 3, SplitMix64(1))

    def test_retry_cap_reports_broken_rng(self):
        class ZeroStream:
            def randint(self, lo, hi):
                return 0

        with pytest.raises(RuntimeError, match="degenerate"):
            random_low_rank(3, 1, 3, ZeroStream())


class TestRunFuzz:
    def test_small_campaign_clean(self):
        report = run_fuzz(FuzzConfig(n=(3, 5), rank=(1, 2), trials=30, seed=606))
        assert report.violations == 0
        assert report.trials_run == 30
        assert sum(report.slack_histogram.values()) == 30
        assert report.min_slack == min(report.slack_histogram)
        assert report.max_slack == max(report.slack_histogram)

    def test_reproducible_reports(self):
        cfg = FuzzConfig(n=4, rank=1, trials=20, seed=99)
        r1 = run_fuzz(cfg)
        r2 = run_fuzz(cfg)
        strip = lambda rep: dataclasses.replace(rep, elapsed=0.0)
        assert strip(r1) == strip(r2)

    def test_generate_trial_reproducible(self):
        cfg = FuzzConfig(n=(3, 8), rank=(1, 3), trials=10, seed=1234)
        a = generate_trial(cfg, 3)
        b = generate_trial(cfg, 3)
        assert a.a == b.a and a.b == b.b and a.spec == b.spec

    def test_zero_perturbation_slack_is_zero(self):
        # B = 0 makes the improved bound collapse to |Lambda(A)| exactly
        for t in range(10):
            stream = SplitMix64(8_000 + t)
            spec = random_jordan_spec(stream.randint(2, 6), stream)
            a = build_jordan(spec)
            rep = bound_report(a, ExactMatrix.zeros(a.rows, a.rows))
            assert rep.slack == 0

    def test_config_validation(self):
        with pytest.raises(InputError):
            FuzzConfig(n=(5, 3), rank=1, trials=10, seed=1)
        with pytest.raises(InputError):
            FuzzConfig(n=3, rank=4, trials=10, seed=1)
        with pytest.raises(InputError):
            FuzzConfig(n=3, rank=1, trials=0, seed=1)
        with pytest.raises(InputError):
            FuzzConfig(n=3, rank=1, trials=5, seed=1, max_entry=0)

    def test_bundle_roundtrip(self, tmp_path):
        cfg = FuzzConfig(n=4, rank=2, trials=1, seed=5)
        instance = generate_trial(cfg, 0)
        bundle = write_reproduction_bundle(str(tmp_path), cfg, instance)
        assert load_matrix(f"{bundle}/A.mat") == instance.a
        assert load_matrix(f"{bundle}/B.mat") == instance.b
        assert load_matrix(f"{bundle}/C.mat") == instance.a + instance.b


class TestExampleSuite:
    def test_family_table(self):
        result = worked_example_suite(10)
        assert len(result.family_rows) == 9
        row3 = result.family_rows[2]
        assert (row3.farrell_bound, row3.improved_bound) == (13, 7)
        for row in result.family_rows:
            assert row.farrell_bound == 10 + row.r
            assert row.improved_bound == 2 * row.r + 1
            assert row.defectivity_c == 10 - 1 - row.r
            assert row.actual_distinct <= row.improved_bound

    def test_smallest_dimension(self):
        result = worked_example_suite(2)
        (row,) = result.family_rows
        assert (row.farrell_bound, row.improved_bound) == (3, 3)
        assert row.actual_distinct <= 2

    def test_worked_example_report(self):
        rep = worked_example_suite(4).worked_example
        assert (rep.farrell_bound, rep.improved_bound, rep.actual_distinct_c) == (4, 3, 3)

    def test_n_too_small(self):
        with pytest.raises(InputError):
            worked_example_suite(1)

    def test_staircase_needs_valid_rank(self):
        with pytest.raises(InputError):
            staircase_perturbation(4, 4)
