"""Exact Jordan-structure invariants and distinct-eigenvalue perturbation
bounds over the Gaussian rationals."""

from .errors import InputError, ParseError, VerificationViolation
from .exactpoly import (
    GaussianRational,
    Poly,
    SquarefreeDecomposition,
    as_gaussian,
    poly_divmod,
    poly_gcd,
    squarefree_decompose,
    squarefree_part,
)
from .rootfind import gaussian_rational_roots
from .eigenstructure import (
    EigenstructureSummary,
    ExactMatrix,
    InvariantFactors,
    algebraic_multiplicity_at,
    char_poly,
    geometric_multiplicity_at,
    invariant_factors,
    min_poly,
    poly_eval_matrix,
    rank,
    shared_spectrum_count,
    summarize,
)
from .bounds import (
    AlphaCandidate,
    BoundReport,
    MgDropCheck,
    SplitReport,
    alpha_objective,
    bound_report,
    corollary41_check,
    corollary42_check,
    corollary43_check,
    hermitian_split,
    krylov_degree_bound,
    split_bounds,
)
from .fuzzharness import (
    ExampleFamilyRow,
    ExampleSuiteResult,
    FuzzConfig,
    FuzzReport,
    JordanSpec,
    SplitMix64,
    build_jordan,
    generate_trial,
    jordan_block_matrix,
    worked_example_suite,
    random_jordan_spec,
    random_low_rank,
    random_unimodular,
    random_unimodular_pair,
    run_fuzz,
    staircase_perturbation,
    trial_seed,
    worked_example_matrices,
)
from .matio import format_matrix, load_matrix, parse_matrix, save_matrix

__version__ = "0.1.0"
