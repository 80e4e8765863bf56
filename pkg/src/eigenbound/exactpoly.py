"""Exact arithmetic over the Gaussian rationals and their polynomials.

Scalars are ``GaussianRational`` values ``re + im*i`` whose parts are
``gmpy2.mpq`` rationals, which keeps every number in lowest terms with a
positive denominator automatically.  All arithmetic in this module is exact;
nothing is ever rounded.

Polynomials are dense coefficient tuples, lowest degree first.  The zero
polynomial is the empty tuple -- that is the single canonical encoding, so
structural equality is value equality.  Division, gcd (always normalized
monic) and Yun's squarefree decomposition are provided; squarefree parts make
"number of distinct complex roots" a degree computation, with no root finding
and no factorization into irreducibles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from gmpy2 import mpq

from .errors import InputError

RatLike = Union[int, Fraction, "mpq"]
ScalarLike = Union["GaussianRational", RatLike]

_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


def as_rat(value: RatLike) -> mpq:
    """Coerce an int/Fraction/mpq to mpq; rejects floats (inexact)."""
    if isinstance(value, float):
        raise InputError(f"refusing inexact float {value!r}; use a rational")
    return mpq(value)


@dataclass(frozen=True, init=False, eq=False)
class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    re: mpq
    im: mpq

    def __init__(self, re: RatLike = 0, im: RatLike = 0):
        object.__setattr__(self, "re", as_rat(re))
        object.__setattr__(self, "im", as_rat(im))

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm_sq(self) -> mpq:
        """|z|^2 = re^2 + im^2, an exact nonnegative rational."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussianRational:
        n = self.norm_sq()
        if not n:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GaussianRational(self.re / n, -self.im / n)

    def sort_key(self) -> tuple[mpq, mpq]:
        """Total order (re, im) used wherever deterministic output matters."""
        return (self.re, self.im)

    def __add__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: ScalarLike) -> GaussianRational:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __neg__(self) -> GaussianRational:
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, type(_MPQ_ZERO))):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{self.im}i"
        if not self.re:
            return imag
        sign = "+" if self.im > 0 else ""
        return f"{self.re}{sign}{imag}"

    def __repr__(self) -> str:
        return f"GaussianRational({self.re!r}, {self.im!r})"


def _coerce(value: ScalarLike):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction, type(_MPQ_ZERO))):
        return GaussianRational(value)
    return NotImplemented


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
IMAG_UNIT = GaussianRational(0, 1)


def as_gaussian(value: ScalarLike) -> GaussianRational:
    """Coerce a scalar-like value to GaussianRational."""
    out = _coerce(value)
    if out is NotImplemented:
        raise InputError(f"cannot interpret {value!r} as a Gaussian rational")
    return out


@dataclass(frozen=True, init=False)
class Poly:
    """Univariate polynomial, dense coefficients lowest degree first.

    Trailing zero coefficients are stripped on construction; the zero
    polynomial is exactly the empty tuple.
    """

    coeffs: tuple[GaussianRational, ...]

    def __init__(self, coeffs: Iterable[ScalarLike] = ()):
        cs = [as_gaussian(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> Poly:
        return cls(())

    @classmethod
    def one(cls) -> Poly:
        return cls((ONE,))

    @classmethod
    def x(cls) -> Poly:
        return cls((ZERO, ONE))

    @classmethod
    def constant(cls, c: ScalarLike) -> Poly:
        return cls((as_gaussian(c),))

    @classmethod
    def monomial(cls, degree: int, coeff: ScalarLike = 1) -> Poly:
        return cls((ZERO,) * degree + (as_gaussian(coeff),))

    @classmethod
    def from_roots(cls, roots: Iterable[ScalarLike]) -> Poly:
        """Monic product of (x - r) over the given roots."""
        out = cls.one()
        for r in roots:
            out = out * cls((-as_gaussian(r), ONE))
        return out

    # -- structure ----------------------------------------------------

    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> GaussianRational:
        if not self.coeffs:
            raise InputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def monic(self) -> Poly:
        """Scale so the leading coefficient is one."""
        lead = self.leading()
        if lead == ONE:
            return self
        inv = lead.inverse()
        return Poly(tuple(c * inv for c in self.coeffs))

    def coefficient(self, k: int) -> GaussianRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    def __sub__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> Poly:
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: Union[Poly, ScalarLike]) -> Poly:
        if not isinstance(other, Poly):
            scal = _coerce(other)
            if scal is NotImplemented:
                return NotImplemented
            return Poly(tuple(c * scal for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return Poly.zero()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for k, b in enumerate(other.coeffs):
                out[j + k] = out[j + k] + a * b
        return Poly(out)

    def __rmul__(self, other: ScalarLike) -> Poly:
        return self.__mul__(other)

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise InputError("negative polynomial power")
        out, base = Poly.one(), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        return poly_divmod(self, other)

    def __floordiv__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return poly_divmod(self, other)[1]

    def derivative(self) -> Poly:
        return Poly(tuple(c * k for k, c in enumerate(self.coeffs) if k))

    def evaluate(self, point: ScalarLike) -> GaussianRational:
        """Horner evaluation at an exact scalar."""
        z = as_gaussian(point)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def divides(self, other: Poly) -> bool:
        return poly_divmod(other, self)[1].is_zero()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not c.is_real():
                body = f"({c}){power}" if power else f"({c})"
                parts.append(("+ " if parts else "") + body)
                continue
            sign = "- " if c.re < 0 else ("+ " if parts else "")
            mag = abs(c.re)
            if mag == 1 and power:
                body = power
            else:
                body = f"{mag}{power}"
            parts.append(sign + body)
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Poly[{self}]"


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Exact division with remainder: a = b*q + r, deg r < deg b."""
    if b.is_zero():
        raise InputError("polynomial division by the zero polynomial")
    db = b.degree()
    if a.degree() < db:
        return Poly.zero(), a
    lead_inv = b.leading().inverse()
    rem = list(a.coeffs)
    quot = [ZERO] * (a.degree() - db + 1)
    for k in range(a.degree() - db, -1, -1):
        c = rem[k + db] * lead_inv
        if c.is_zero():
            continue
        quot[k] = c
        for j, bc in enumerate(b.coeffs):
            rem[k + j] = rem[k + j] - c * bc
    return Poly(quot), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor via the Euclidean algorithm.

    Each remainder is renormalized monic, which keeps coefficient growth in
    check without changing the result (gcd is defined up to units).
    """
    if a.is_zero() and b.is_zero():
        raise InputError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        r = poly_divmod(a, b)[1]
        a, b = b, (r if r.is_zero() else r.monic())
    return a.monic()


def squarefree_part(p: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of p.

    Its degree is the number of distinct complex roots of p, a fact that is
    invariant under extending the coefficient field.
    """
    if p.is_zero():
        raise InputError("squarefree part of the zero polynomial")
    if p.is_constant():
        return Poly.one()
    return poly_divmod(p, poly_gcd(p, p.derivative()))[0].monic()


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """p = unit * product of g_k^k with g_k monic, squarefree, coprime.

    ``parts`` holds (g_k, k) with multiplicities strictly increasing and
    every stored g_k nonconstant.
    """

    unit: GaussianRational
    parts: tuple[tuple[Poly, int], ...]

    def reconstruct(self) -> Poly:
        out = Poly.constant(self.unit)
        for g, k in self.parts:
            out = out * g**k
        return out

    def squarefree_product(self) -> Poly:
        out = Poly.one()
        for g, _ in self.parts:
            out = out * g
        return out

    def distinct_root_count(self) -> int:
        return sum(g.degree() for g, _ in self.parts)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.parts)


def squarefree_decompose(p: Poly) -> SquarefreeDecomposition:
    """Yun's algorithm (valid in characteristic zero)."""
    if p.is_zero():
        raise InputError("squarefree decomposition of the zero polynomial")
    unit = p.leading()
    if p.is_constant():
        return SquarefreeDecomposition(unit, ())
    f = p.monic()
    g = poly_gcd(f, f.derivative())
    c = poly_divmod(f, g)[0]
    d = poly_divmod(f.derivative(), g)[0] - c.derivative()
    parts: list[tuple[Poly, int]] = []
    k = 1
    while not c.is_constant():
        a = poly_gcd(c, d)
        if a.degree() >= 1:
            parts.append((a, k))
        c = poly_divmod(c, a)[0]
        d = poly_divmod(d, a)[0] - c.derivative()
        k += 1
    return SquarefreeDecomposition(unit, tuple(parts))
