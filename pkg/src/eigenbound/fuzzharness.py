"""Structure-aware fuzzing of the perturbation bounds.

Matrices are generated with *known* Jordan structure: a block-diagonal
Jordan matrix is built from a ``JordanSpec`` (whose invariants are readable
directly off that object) and conjugated by a random unimodular integer matrix,
which changes nothing about the eigenstructure and keeps all arithmetic
exact.  Perturbations are random integer products U @ V of prescribed rank.
Every trial then recomputes the invariants independently, evaluates both
bounds, and checks every proved inequality; any failure aborts the campaign
with a reproduction bundle written in the matrix file format.

Determinism contract
--------------------
All randomness comes from SplitMix64 streams.  Trial ``t`` of a campaign
with seed ``s`` uses a stream seeded with::

    trial_seed(s, t) = mix64(s XOR mix64((t + 1) * 0x9E3779B97F4A7C15))

where ``mix64`` is the SplitMix64 finalizer (xor-shift 30 / multiply
0xBF58476D1CE4E5B9 / xor-shift 27 / multiply 0x94D049BB133111EB /
xor-shift 31, all mod 2^64) and the stream emits
``mix64(state += 0x9E3779B97F4A7C15)``.  Draws inside a trial happen in a
fixed documented order (dimension, rank, Jordan spec, conjugation ops,
perturbation factors), so campaigns reproduce bit for bit -- the matrices
themselves match, not just the statistics -- independent of scheduling.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from gmpy2 import mpq

from .errors import InputError, VerificationViolation
from .eigenstructure import ExactMatrix, rank, summarize
from .exactpoly import GaussianRational, Poly
from .bounds import BoundReport, bound_report, corollary41_check
from .matio import save_matrix

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    """SplitMix64 finalizer; a 64-bit bijection with good avalanche."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def trial_seed(seed: int, trial: int) -> int:
    """Substream seed for one trial; decorrelated across trial indices."""
    return mix64((seed & _MASK) ^ mix64((trial + 1) * _GOLDEN))


class SplitMix64:
    """Tiny deterministic RNG; the entire generator is specified above."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return mix64(self.state)

    def randrange(self, n: int) -> int:
        """Uniform-ish integer in [0, n); modulo reduction by design.

        The negligible modulo bias is irrelevant here -- the contract is
        determinism, not statistical perfection.
        """
        if n <= 0:
            raise InputError(f"randrange needs a positive bound, got {n}")
        return self.next_u64() % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform-ish integer in [lo, hi] inclusive."""
        if hi < lo:
            raise InputError(f"empty range [{lo}, {hi}]")
        return lo + self.randrange(hi - lo + 1)

    def choice(self, seq: Sequence):
        return seq[self.randrange(len(seq))]


@dataclass(frozen=True)
class JordanSpec:
    """Prescribed Jordan structure: (eigenvalue, block sizes) per eigenvalue.

    Ground-truth invariants are readable without any linear algebra:
    n = sum of sizes, the distinct count is the number of eigenvalues, the
    defectivity is the total of (size - 1), and the derogatory index is the
    total of (block count - 1).
    """

    blocks: tuple[tuple[GaussianRational, tuple[int, ...]], ...]

    def __post_init__(self):
        if not self.blocks:
            raise InputError("empty Jordan spec")
        seen = set()
        for lam, sizes in self.blocks:
            if lam in seen:
                raise InputError(f"repeated eigenvalue {lam} in Jordan spec")
            seen.add(lam)
            if not sizes or any(s < 1 for s in sizes):
                raise InputError(f"eigenvalue {lam} needs block sizes >= 1")

    @property
    def n(self) -> int:
        return sum(s for _, sizes in self.blocks for s in sizes)

    @property
    def num_distinct(self) -> int:
        return len(self.blocks)

    @property
    def defectivity(self) -> int:
        return sum(s - 1 for _, sizes in self.blocks for s in sizes)

    @property
    def derogatory_index(self) -> int:
        return sum(len(sizes) - 1 for _, sizes in self.blocks)

    def char_poly(self) -> Poly:
        out = Poly.one()
        for lam, sizes in self.blocks:
            out = out * Poly((-lam, 1)) ** sum(sizes)
        return out

    def min_poly(self) -> Poly:
        out = Poly.one()
        for lam, sizes in self.blocks:
            out = out * Poly((-lam, 1)) ** max(sizes)
        return out


def build_jordan(spec: JordanSpec) -> ExactMatrix:
    """Block-diagonal Jordan matrix with the spec's blocks, in spec order."""
    n = spec.n
    rows = [[GaussianRational(0)] * n for _ in range(n)]
    pos = 0
    for lam, sizes in spec.blocks:
        for size in sizes:
            for k in range(size):
                rows[pos + k][pos + k] = lam
                if k + 1 < size:
                    rows[pos + k][pos + k + 1] = GaussianRational(1)
            pos += size
    return ExactMatrix.from_rows(rows)


# Eigenvalue pool for random specs: small integers plus a few small Gaussian
# integers so the complex code paths are exercised while coefficient growth
# in the Smith reduction stays tame.
EIGENVALUE_POOL: tuple[GaussianRational, ...] = tuple(
    [GaussianRational(k) for k in range(-4, 5)]
    + [GaussianRational(0, 1), GaussianRational(1, 1), GaussianRational(0, -1)]
)


def random_jordan_spec(n: int, stream: SplitMix64) -> JordanSpec:
    """Random spec with n total size.

    Draw order: number of distinct eigenvalues, the eigenvalues themselves
    (partial Fisher-Yates over the pool), one extra size unit at a time,
    then the block partition of each eigenvalue's total.
    """
    if n < 1:
        raise InputError("dimension must be >= 1")
    k = stream.randint(1, min(n, len(EIGENVALUE_POOL)))
    pool = list(EIGENVALUE_POOL)
    chosen = []
    for i in range(k):
        j = stream.randint(i, len(pool) - 1)
        pool[i], pool[j] = pool[j], pool[i]
        chosen.append(pool[i])
    totals = [1] * k
    for _ in range(n - k):
        totals[stream.randrange(k)] += 1
    blocks = []
    for lam, total in zip(chosen, totals):
        sizes = []
        left = total
        while left:
            s = stream.randint(1, left)
            sizes.append(s)
            left -= s
        blocks.append((lam, tuple(sizes)))
    return JordanSpec(tuple(blocks))


_MULTIPLIER_RANGE = (-3, 3)


def _unimodular_ops(n: int, ops: int, stream: SplitMix64) -> list[tuple]:
    """Elementary op list: ('add', i, j, m) = row_i += m*row_j, or ('swap', i, j)."""
    out = []
    for _ in range(ops):
        kind = stream.randrange(2)
        i = stream.randrange(n)
        j = stream.randrange(n - 1)
        if j >= i:
            j += 1
        if kind == 0:
            out.append(("add", i, j, stream.randint(*_MULTIPLIER_RANGE)))
        else:
            out.append(("swap", i, j))
    return out


def _apply_row_ops(rows: list[list[GaussianRational]], ops: Iterable[tuple]) -> None:
    for op in ops:
        if op[0] == "add":
            _, i, j, m = op
            if m:
                rows[i] = [a + m * b for a, b in zip(rows[i], rows[j])]
        else:
            _, i, j = op
            rows[i], rows[j] = rows[j], rows[i]


def _identity_rows(n: int) -> list[list[GaussianRational]]:
    one, zero = GaussianRational(1), GaussianRational(0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def random_unimodular_pair(n: int, ops: int, stream: SplitMix64) -> tuple[ExactMatrix, ExactMatrix]:
    """(P, P^-1), both integer, built from random elementary row operations.

    The inverse is exact: it replays the inverted operations in reverse
    order on the identity, so no division ever happens.
    """
    if n < 1 or ops < 0:
        raise InputError("need n >= 1 and ops >= 0")
    op_list = _unimodular_ops(n, ops, stream)
    forward = _identity_rows(n)
    _apply_row_ops(forward, op_list)
    inverse = _identity_rows(n)
    undo = [
        ("add", op[1], op[2], -op[3]) if op[0] == "add" else op
        for op in reversed(op_list)
    ]
    _apply_row_ops(inverse, undo)
    return ExactMatrix.from_rows(forward), ExactMatrix.from_rows(inverse)


def random_unimodular(n: int, ops: int, stream: SplitMix64) -> ExactMatrix:
    """Random integer matrix with determinant +-1."""
    return random_unimodular_pair(n, ops, stream)[0]


_LOW_RANK_RETRY_CAP = 32


def random_low_rank(n: int, r: int, bound: int, stream: SplitMix64) -> ExactMatrix:
    """B = U @ V with U (n x r), V (r x n) random integers in [-bound, bound].

    Degenerate draws with rank(B) < r are regenerated; the draws live on a
    measure-zero failure set, so exceeding the retry cap means the RNG is
    broken and is reported as an internal error rather than tolerated.
    """
    if not 1 <= r <= n:
        raise InputError(f"rank must satisfy 1 <= r <= n, got r={r}, n={n}")
    if bound < 1:
        raise InputError(f"entry bound must be >= 1, got {bound}")
    for _ in range(_LOW_RANK_RETRY_CAP):
        u = ExactMatrix(
            n, r, [GaussianRational(stream.randint(-bound, bound)) for _ in range(n * r)]
        )
        v = ExactMatrix(
            r, n, [GaussianRational(stream.randint(-bound, bound)) for _ in range(r * n)]
        )
        b = u * v
        if rank(b) == r:
            return b
    raise RuntimeError(
        f"{_LOW_RANK_RETRY_CAP} consecutive degenerate rank-{r} draws; RNG is broken"
    )


IntOrRange = Union[int, tuple[int, int]]


def _as_range(value: IntOrRange, name: str) -> tuple[int, int]:
    if isinstance(value, int):
        value = (value, value)
    lo, hi = value
    if lo > hi or lo < 1:
        raise InputError(f"invalid {name} range [{lo}, {hi}]")
    return (lo, hi)


@dataclass(frozen=True)
class FuzzConfig:
    """Campaign parameters; n and rank accept a single value or (lo, hi)."""

    n: IntOrRange
    rank: IntOrRange
    trials: int
    seed: int
    max_entry: int = 3
    unimodular_ops: int | None = None  # None = 3 * n per trial

    def __post_init__(self):
        object.__setattr__(self, "n", _as_range(self.n, "dimension"))
        object.__setattr__(self, "rank", _as_range(self.rank, "rank"))
        if self.rank[0] > self.n[1]:
            raise InputError("rank range exceeds the dimension range")
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if self.max_entry < 1:
            raise InputError("max_entry must be >= 1")


@dataclass(frozen=True)
class FuzzReport:
    """Aggregate campaign outcome; violations must be zero on completion."""

    trials_run: int
    violations: int
    tight_count: int
    slack_histogram: dict[int, int]
    min_slack: int
    max_slack: int
    elapsed: float


@dataclass(frozen=True)
class TrialInstance:
    """One reproducible fuzz instance (exposed for audits and tests)."""

    trial: int
    n: int
    rank_requested: int
    spec: JordanSpec
    a: ExactMatrix
    b: ExactMatrix


def generate_trial(config: FuzzConfig, trial: int) -> TrialInstance:
    """Deterministically rebuild the instance of one trial of a campaign."""
    stream = SplitMix64(trial_seed(config.seed, trial))
    n_lo, n_hi = config.n
    r_lo, r_hi = config.rank
    n = stream.randint(n_lo, n_hi)
    r = min(stream.randint(r_lo, r_hi), n)
    spec = random_jordan_spec(n, stream)
    ops = config.unimodular_ops if config.unimodular_ops is not None else 3 * n
    p, p_inv = random_unimodular_pair(n, ops, stream)
    a = p * build_jordan(spec) * p_inv
    b = random_low_rank(n, r, config.max_entry, stream)
    return TrialInstance(trial, n, r, spec, a, b)


def _check_trial(instance: TrialInstance) -> BoundReport:
    """Run every per-trial verification; raises VerificationViolation."""
    a, b, spec = instance.a, instance.b, instance.spec
    summary_a = summarize(a)
    ground_truth_ok = (
        summary_a.num_distinct == spec.num_distinct
        and summary_a.defectivity == spec.defectivity
        and summary_a.derogatory_index == spec.derogatory_index
        and summary_a.char_poly == spec.char_poly()
        and summary_a.min_poly == spec.min_poly()
    )
    if not ground_truth_ok:
        raise VerificationViolation(
            "conjugated Jordan matrix disagrees with its spec's ground truth",
            {"A": a, "B": b},
        )
    report = bound_report(a, b)  # raises on any bound/mg violation
    cor41 = corollary41_check(report)
    if not cor41.holds:
        raise VerificationViolation(
            f"derogatory index bound failed: {cor41.lhs} < {cor41.rhs}",
            {"A": a, "B": b},
        )
    d_c = report.summary_c.defectivity
    if (report.improved_bound < report.farrell_bound) != (d_c >= 1):
        raise VerificationViolation(
            "improved bound must undercut the baseline exactly when d(C) >= 1",
            {"A": a, "B": b},
        )
    return report


def write_reproduction_bundle(
    directory: str, config: FuzzConfig, instance: TrialInstance
) -> str:
    """Serialize the failing instance as matrix files; returns the directory."""
    path = os.path.join(
        directory, f"fuzz-violation-seed{config.seed}-trial{instance.trial}"
    )
    os.makedirs(path, exist_ok=True)
    stamp = (
        f"seed {config.seed} trial {instance.trial} "
        f"n {instance.n} rank {instance.rank_requested}"
    )
    save_matrix(os.path.join(path, "A.mat"), instance.a, (stamp,))
    save_matrix(os.path.join(path, "B.mat"), instance.b, (stamp,))
    save_matrix(os.path.join(path, "C.mat"), instance.a + instance.b, (stamp,))
    return path


def run_fuzz(config: FuzzConfig, bundle_dir: str = ".") -> FuzzReport:
    """Run a campaign; abort with a reproduction bundle on any violation.

    Trials are fully independent given (seed, trial index): the report is a
    pure function of the config, never of scheduling or timing.
    """
    histogram: dict[int, int] = {}
    tight = 0
    started = time.perf_counter()
    for t in range(config.trials):
        instance = generate_trial(config, t)
        try:
            report = _check_trial(instance)
        except VerificationViolation as exc:
            bundle = write_reproduction_bundle(bundle_dir, config, instance)
            raise VerificationViolation(
                f"trial {t}: {exc} (reproduction bundle: {bundle})",
                {**exc.details, "bundle": bundle, "seed": config.seed, "trial": t},
            ) from exc
        histogram[report.slack] = histogram.get(report.slack, 0) + 1
        if report.slack == 0:
            tight += 1
    return FuzzReport(
        trials_run=config.trials,
        violations=0,
        tight_count=tight,
        slack_histogram=dict(sorted(histogram.items())),
        min_slack=min(histogram),
        max_slack=max(histogram),
        elapsed=time.perf_counter() - started,
    )


# -- worked examples ---------------------------------------------------------


def jordan_block_matrix(n: int, lam: GaussianRational = GaussianRational(0)) -> ExactMatrix:
    """Single n x n Jordan block at lam: |Lambda| = 1, d = n - 1."""
    return build_jordan(JordanSpec(((lam, (n,)),)))


def staircase_perturbation(n: int, r: int) -> ExactMatrix:
    """Rank-r update: diag 1..r with a -1 superdiagonal, embedded top-left.

    Added to an n x n Jordan block at lam it cancels the first r coupling
    ones and spreads the diagonal, leaving C with eigenvalues
    lam+1, ..., lam+r and an (n-r)-sized block at lam.
    """
    if not 1 <= r <= n - 1:
        raise InputError(f"staircase perturbation needs 1 <= r <= n-1, got r={r}, n={n}")
    rows = [[GaussianRational(0)] * n for _ in range(n)]
    for i in range(r):
        rows[i][i] = GaussianRational(i + 1)
        rows[i][i + 1] = GaussianRational(-1)
    return ExactMatrix.from_rows(rows)


def worked_example_matrices() -> tuple[ExactMatrix, ExactMatrix]:
    """The exact 5x5 pair (A, B) of the worked rank-one example."""
    a = ExactMatrix.from_rows(
        [
            [1, 1, 0, 0, 0],
            [0, 1, 1, 0, 0],
            [0, 0, 1, 0, 0],
            [0, 0, 0, 1, 0],
            [0, 0, 0, 0, 1],
        ]
    )
    b = ExactMatrix.from_rows(
        [
            [1, 1, 1, 1, 1],
            [1, 1, 1, 1, 1],
            [0, 0, 0, 0, 0],
            [1, 1, 1, 1, 1],
            [0, 0, 0, 0, 0],
        ]
    )
    return a, b


@dataclass(frozen=True)
class ExampleFamilyRow:
    """One row of the Jordan-block family table."""

    r: int
    farrell_bound: int
    improved_bound: int
    defectivity_c: int
    actual_distinct: int


@dataclass(frozen=True)
class ExampleSuiteResult:
    n: int
    family_rows: tuple[ExampleFamilyRow, ...]
    worked_example: BoundReport


def worked_example_suite(n: int = 10) -> ExampleSuiteResult:
    """Golden tests for both worked examples.

    (a) The n x n Jordan block perturbed by every staircase update of rank
    r = 1..n-1 must give baseline bound n + r, improved bound 2r + 1,
    d(C_r) = n - 1 - r and an actual count within the improved bound.
    (b) The 5x5 rank-one example must reproduce its published numbers
    exactly.  Any mismatch raises VerificationViolation.
    """
    if n < 2:
        raise InputError("the Jordan-block family needs n >= 2")
    a = jordan_block_matrix(n)
    rows = []
    for r in range(1, n):
        b = staircase_perturbation(n, r)
        report = bound_report(a, b)
        row = ExampleFamilyRow(
            r=r,
            farrell_bound=report.farrell_bound,
            improved_bound=report.improved_bound,
            defectivity_c=report.summary_c.defectivity,
            actual_distinct=report.actual_distinct_c,
        )
        expected = (n + r, 2 * r + 1, n - 1 - r)
        got = (row.farrell_bound, row.improved_bound, row.defectivity_c)
        if got != expected or row.actual_distinct > min(row.improved_bound, n):
            raise VerificationViolation(
                f"Jordan-block family mismatch at r={r}: expected "
                f"(baseline, improved, d(C)) = {expected}, got {got}",
                {"A": a, "B": b},
            )
        rows.append(row)

    a5, b5 = worked_example_matrices()
    report5 = bound_report(a5, b5)
    expected5 = (1, 2, 1, 1, 3, 4, 3)
    got5 = (
        report5.summary_a.num_distinct,
        report5.summary_a.defectivity,
        report5.rank_b,
        report5.summary_c.defectivity,
        report5.actual_distinct_c,
        report5.farrell_bound,
        report5.improved_bound,
    )
    if got5 != expected5:
        raise VerificationViolation(
            f"5x5 worked example mismatch: expected {expected5}, got {got5}",
            {"A": a5, "B": b5},
        )
    return ExampleSuiteResult(n=n, family_rows=tuple(rows), worked_example=report5)
