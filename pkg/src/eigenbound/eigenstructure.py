"""Exact eigenstructure invariants of matrices over the Gaussian rationals.

Everything is computed without root finding:

* rank by exact Gaussian elimination (pivot = first nonzero entry in a
  row-major scan; with exact arithmetic pivot choice is only a determinism
  decision),
* the characteristic polynomial by the Faddeev-LeVerrier recurrence (the
  only divisions are by the integers 1..n, exact over the rationals),
* the invariant factors f_1 | ... | f_n as the Smith normal form of xI - M
  over the polynomial ring, f_n being the minimal polynomial,
* the distinct-eigenvalue count as the degree of the squarefree part of the
  minimal polynomial, the defectivity as n minus the summed squarefree
  degrees of all invariant factors, and the derogatory index from the
  identity  distinct + defectivity + derogatory = n.

The counts refer to complex eigenvalues even when those eigenvalues are not
Gaussian rational: squarefree degrees and gcd degrees do not change under
field extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError
from .exactpoly import (
    ONE,
    ZERO,
    GaussianRational,
    Poly,
    ScalarLike,
    as_gaussian,
    poly_divmod,
    poly_gcd,
    squarefree_decompose,
    squarefree_part,
    SquarefreeDecomposition,
)


@dataclass(frozen=True, init=False)
class ExactMatrix:
    """Dense matrix of Gaussian rationals, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[GaussianRational, ...]

    def __init__(self, rows: int, cols: int, entries: Iterable[ScalarLike]):
        ents = tuple(as_gaussian(e) for e in entries)
        if rows < 0 or cols < 0 or len(ents) != rows * cols:
            raise InputError(
                f"entry count {len(ents)} does not match shape {rows}x{cols}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[ScalarLike]]) -> ExactMatrix:
        if not rows:
            raise InputError("matrix needs at least one row")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InputError("ragged rows")
        return cls(len(rows), width, [e for r in rows for e in r])

    @classmethod
    def identity(cls, n: int) -> ExactMatrix:
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ExactMatrix:
        return cls(rows, cols, [ZERO] * (rows * cols))

    def entry(self, i: int, j: int) -> GaussianRational:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[GaussianRational, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[GaussianRational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def _require_square(self, op: str) -> int:
        if not self.is_square:
            raise InputError(f"{op} requires a square matrix, got {self.rows}x{self.cols}")
        return self.rows

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError(
                f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )
        return ExactMatrix(
            self.rows, self.cols,
            [a + b for a, b in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix(self.rows, self.cols, [-e for e in self.entries])

    def __mul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.cols != other.rows:
                raise InputError(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            out = []
            for i in range(self.rows):
                lhs = self.row(i)
                for j in range(other.cols):
                    acc = ZERO
                    for k, a in enumerate(lhs):
                        if not a.is_zero():
                            acc = acc + a * other.entry(k, j)
                    out.append(acc)
            return ExactMatrix(self.rows, other.cols, out)
        scalar = as_gaussian(other)
        return ExactMatrix(self.rows, self.cols, [e * scalar for e in self.entries])

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, s: ScalarLike) -> ExactMatrix:
        return self * as_gaussian(s)

    def transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.cols, self.rows,
            [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)],
        )

    def conjugate_transpose(self) -> ExactMatrix:
        return ExactMatrix(
            self.cols, self.rows,
            [self.entry(i, j).conjugate() for j in range(self.cols) for i in range(self.rows)],
        )

    def trace(self) -> GaussianRational:
        n = self._require_square("trace")
        acc = ZERO
        for i in range(n):
            acc = acc + self.entry(i, i)
        return acc

    def shifted(self, lam: ScalarLike) -> ExactMatrix:
        """lam*I - self (the resolvent-style shift used for multiplicities)."""
        n = self._require_square("shift")
        lam = as_gaussian(lam)
        out = [-e for e in self.entries]
        for i in range(n):
            out[i * n + i] = out[i * n + i] + lam
        return ExactMatrix(n, n, out)

    def add_scalar(self, lam: ScalarLike) -> ExactMatrix:
        """self + lam*I."""
        n = self._require_square("scalar shift")
        lam = as_gaussian(lam)
        out = list(self.entries)
        for i in range(n):
            out[i * n + i] = out[i * n + i] + lam
        return ExactMatrix(n, n, out)

    def __str__(self) -> str:
        grid = [[str(e) for e in self.row(i)] for i in range(self.rows)]
        widths = [max(len(grid[i][j]) for i in range(self.rows)) for j in range(self.cols)]
        return "\n".join(
            "[" + "  ".join(cell.rjust(w) for cell, w in zip(r, widths)) + "]"
            for r in grid
        )


def rank(matrix: ExactMatrix) -> int:
    """Exact rank by Gaussian elimination, first-nonzero row-major pivoting."""
    m, n = matrix.rows, matrix.cols
    work = [list(matrix.row(i)) for i in range(m)]
    r = 0
    for step in range(min(m, n)):
        pivot = None
        for i in range(r, m):
            for j in range(step, n):
                if not work[i][j].is_zero():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        pi, pj = pivot
        work[r], work[pi] = work[pi], work[r]
        if pj != step:
            for row_ in work:
                row_[step], row_[pj] = row_[pj], row_[step]
        inv = work[r][step].inverse()
        for i in range(r + 1, m):
            factor = work[i][step]
            if factor.is_zero():
                continue
            factor = factor * inv
            row_i, row_r = work[i], work[r]
            for j in range(step, n):
                row_i[j] = row_i[j] - factor * row_r[j]
        r += 1
    return r


def char_poly(matrix: ExactMatrix) -> Poly:
    """Monic characteristic polynomial det(xI - M) by Faddeev-LeVerrier."""
    n = matrix._require_square("char_poly")
    coeffs = [ZERO] * n + [ONE]
    aux = ExactMatrix.identity(n)
    for k in range(1, n + 1):
        prod = matrix * aux
        coeffs[n - k] = -(prod.trace() / k)
        if k < n:
            aux = prod.add_scalar(coeffs[n - k])
    return Poly(coeffs)


@dataclass(frozen=True)
class InvariantFactors:
    """Diagonal f_1 | f_2 | ... | f_n of the Smith form of xI - M.

    Trivial factors equal to 1 are kept so there are always n entries; the
    last factor is the minimal polynomial.
    """

    factors: tuple[Poly, ...]

    @property
    def minimal_polynomial(self) -> Poly:
        return self.factors[-1]

    def product(self) -> Poly:
        out = Poly.one()
        for f in self.factors:
            out = out * f
        return out

    def chain_ok(self) -> bool:
        return all(
            self.factors[i].divides(self.factors[i + 1])
            for i in range(len(self.factors) - 1)
        )


def _smith_min_pivot(work: list[list[Poly]], k: int, n: int) -> tuple[int, int] | None:
    best = None
    best_deg = None
    for i in range(k, n):
        for j in range(k, n):
            p = work[i][j]
            if p.is_zero():
                continue
            d = p.degree()
            if best_deg is None or d < best_deg:
                best, best_deg = (i, j), d
    return best


def invariant_factors(matrix: ExactMatrix) -> InvariantFactors:
    """Smith normal form of xI - M over the polynomial ring.

    Pivot rule: nonzero entry of minimal degree in the working submatrix,
    ties broken by smallest (row, col); rows/columns are cleared by exact
    division with a remainder loop, and each finished pivot is normalized
    monic.  The divisibility chain is enforced before moving on.
    """
    n = matrix._require_square("invariant_factors")
    x = Poly.x()
    work = [
        [
            (x if i == j else Poly.zero()) - Poly.constant(matrix.entry(i, j))
            for j in range(n)
        ]
        for i in range(n)
    ]
    for k in range(n):
        while True:
            pos = _smith_min_pivot(work, k, n)
            if pos is None:
                raise InputError("xI - M degenerated to zero block; cannot happen")
            pi, pj = pos
            if pi != k:
                work[k], work[pi] = work[pi], work[k]
            if pj != k:
                for row_ in work:
                    row_[k], row_[pj] = row_[pj], row_[k]
            pivot = work[k][k]
            dirty = False
            for i in range(k + 1, n):
                if work[i][k].is_zero():
                    continue
                q, r = poly_divmod(work[i][k], pivot)
                if not q.is_zero():
                    row_i, row_k = work[i], work[k]
                    for j in range(k, n):
                        row_i[j] = row_i[j] - q * row_k[j]
                if not r.is_zero():
                    dirty = True
            for j in range(k + 1, n):
                if work[k][j].is_zero():
                    continue
                q, r = poly_divmod(work[k][j], pivot)
                if not q.is_zero():
                    for i in range(k, n):
                        work[i][j] = work[i][j] - q * work[i][k]
                if not r.is_zero():
                    dirty = True
            if dirty:
                continue
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if not poly_divmod(work[i][j], pivot)[1].is_zero():
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_k, row_o = work[k], work[offender]
            for j in range(k, n):
                row_k[j] = row_k[j] + row_o[j]
        work[k][k] = work[k][k].monic()
    factors = tuple(work[k][k] for k in range(n))
    out = InvariantFactors(factors)
    if not out.chain_ok():
        raise AssertionError("Smith reduction produced a broken divisibility chain")
    return out


def min_poly(matrix: ExactMatrix) -> Poly:
    """Minimal polynomial of M (the last invariant factor of xI - M)."""
    return invariant_factors(matrix).minimal_polynomial


def poly_eval_matrix(p: Poly, matrix: ExactMatrix) -> ExactMatrix:
    """Horner evaluation of p at a square matrix."""
    n = matrix._require_square("polynomial evaluation")
    acc = ExactMatrix.zeros(n, n)
    for c in reversed(p.coeffs):
        acc = (matrix * acc).add_scalar(c)
    return acc


@dataclass(frozen=True)
class EigenstructureSummary:
    """Every structural invariant of one square matrix.

    num_distinct counts distinct complex eigenvalues; defectivity is the
    summed gap between algebraic and geometric multiplicities; the
    derogatory index is the summed surplus of Jordan blocks per eigenvalue.
    They always satisfy num_distinct + defectivity + derogatory_index = n.
    """

    n: int
    char_poly: Poly
    min_poly: Poly
    invariant_factors: InvariantFactors
    num_distinct: int
    defectivity: int
    derogatory_index: int
    multiplicity_profile: SquarefreeDecomposition

    def __post_init__(self):
        if self.num_distinct + self.defectivity + self.derogatory_index != self.n:
            raise AssertionError("invariant count identity violated")
        if not (0 <= self.derogatory_index <= max(self.n - 1, 0)):
            raise AssertionError("derogatory index out of range")
        if self.defectivity < 0:
            raise AssertionError("negative defectivity")

    @property
    def is_diagonalizable(self) -> bool:
        return self.defectivity == 0

    @property
    def is_nonderogatory(self) -> bool:
        return self.derogatory_index == 0


def summarize(matrix: ExactMatrix) -> EigenstructureSummary:
    """Compute the full invariant summary of a square matrix."""
    n = matrix._require_square("summarize")
    cp = char_poly(matrix)
    factors = invariant_factors(matrix)
    prod = factors.product()
    if prod != cp:
        raise AssertionError(
            "invariant factor product disagrees with the characteristic polynomial"
        )
    mp = factors.minimal_polynomial
    sqfree_degrees = [
        0 if f.is_constant() else squarefree_part(f).degree() for f in factors.factors
    ]
    num_distinct = sqfree_degrees[-1]
    profile = squarefree_decompose(cp)
    if profile.distinct_root_count() != num_distinct:
        raise AssertionError(
            "squarefree degree of char poly disagrees with the minimal polynomial"
        )
    defectivity = n - sum(sqfree_degrees)
    derogatory = n - defectivity - num_distinct
    return EigenstructureSummary(
        n=n,
        char_poly=cp,
        min_poly=mp,
        invariant_factors=factors,
        num_distinct=num_distinct,
        defectivity=defectivity,
        derogatory_index=derogatory,
        multiplicity_profile=profile,
    )


def geometric_multiplicity_at(matrix: ExactMatrix, lam: ScalarLike) -> int:
    """dim ker(lam*I - M) = n - rank(lam*I - M); 0 when lam is no eigenvalue."""
    n = matrix._require_square("geometric multiplicity")
    return n - rank(matrix.shifted(lam))


def algebraic_multiplicity_at(matrix: ExactMatrix, lam: ScalarLike) -> int:
    """Largest k with (x - lam)^k dividing the characteristic polynomial."""
    matrix._require_square("algebraic multiplicity")
    linear = Poly((-as_gaussian(lam), ONE))
    p = char_poly(matrix)
    k = 0
    while True:
        q, r = poly_divmod(p, linear)
        if not r.is_zero():
            return k
        p, k = q, k + 1


def shared_spectrum_count(a: ExactMatrix, c: ExactMatrix) -> int:
    """|spectrum(A) intersect spectrum(C)| over the complex numbers.

    Computed as deg gcd of the squarefree characteristic polynomials; gcd
    degree is invariant under field extension, so this counts *all* common
    complex eigenvalues, rational or not.
    """
    a._require_square("shared spectrum")
    c._require_square("shared spectrum")
    if a.rows != c.rows:
        raise InputError(f"dimension mismatch {a.rows} vs {c.rows}")
    sa = squarefree_part(char_poly(a))
    sc = squarefree_part(char_poly(c))
    return poly_gcd(sa, sc).degree()
