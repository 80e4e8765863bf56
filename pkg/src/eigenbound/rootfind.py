"""Exact extraction of the Gaussian-rational roots of a polynomial.

Strategy: take the squarefree part, clear denominators so the polynomial is
monic with Gaussian-integer coefficients, and test the finitely many
candidates allowed by the rational root theorem over Z[i]: every
Gaussian-integer root divides the constant term.  Divisors are enumerated
from the prime factorization of the constant term's norm, using the split /
inert / ramified classification of rational primes in Z[i].

Only linear factors with Gaussian-rational roots are ever produced; nothing
here approximates or isolates irrational roots.

Gaussian integers are handled as plain (a, b) int pairs; the norm
factorization uses deterministic Miller-Rabin plus Brent's variant of
Pollard's rho, all on Python ints.
"""

from __future__ import annotations

import math
from gmpy2 import mpq

from .exactpoly import GaussianRational, Poly, squarefree_part

# -- integer factorization ------------------------------------------------

# Witnesses making Miller-Rabin deterministic below 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = (seed * 0x9E3779B9) % n or 1, seed, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return out


# -- Gaussian integer helpers ----------------------------------------------

GaussInt = tuple[int, int]


def _gi_mul(a: GaussInt, b: GaussInt) -> GaussInt:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gi_norm(a: GaussInt) -> int:
    return a[0] * a[0] + a[1] * a[1]


def _gi_divmod(a: GaussInt, b: GaussInt) -> tuple[GaussInt, GaussInt]:
    """Euclidean division with nearest-integer rounding of a/b."""
    nb = _gi_norm(b)
    num = _gi_mul(a, (b[0], -b[1]))
    q = (_round_div(num[0], nb), _round_div(num[1], nb))
    r0, r1 = a[0] - (q[0] * b[0] - q[1] * b[1]), a[1] - (q[0] * b[1] + q[1] * b[0])
    return q, (r0, r1)


def _round_div(a: int, b: int) -> int:
    # round-half-up nearest integer of a/b for b > 0
    return (2 * a + b) // (2 * b)


def _gi_gcd(a: GaussInt, b: GaussInt) -> GaussInt:
    while b != (0, 0):
        a, b = b, _gi_divmod(a, b)[1]
    return a


def _gi_exact_div(a: GaussInt, b: GaussInt) -> GaussInt | None:
    q, r = _gi_divmod(a, b)
    return q if r == (0, 0) else None


def _gaussian_prime_above(p: int) -> GaussInt:
    """A Gaussian prime dividing the split rational prime p = 1 mod 4."""
    a = 2
    while True:
        x = pow(a, (p - 1) // 4, p)
        if x * x % p == p - 1:
            break
        a += 1
    return _gi_gcd((p, 0), (x, 1))


def _gaussian_prime_powers(g: GaussInt) -> list[tuple[GaussInt, int]]:
    """Gaussian prime factorization of g != 0, up to units."""
    powers: list[tuple[GaussInt, int]] = []
    for p, e in sorted(factorize(_gi_norm(g)).items()):
        if p == 2:
            powers.append(((1, 1), e))
        elif p % 4 == 3:
            powers.append(((p, 0), e // 2))
        else:
            pi = _gaussian_prime_above(p)
            v = 0
            h = g
            while True:
                q = _gi_exact_div(h, pi)
                if q is None:
                    break
                h, v = q, v + 1
            if v:
                powers.append((pi, v))
            if e - v:
                powers.append(((pi[0], -pi[1]), e - v))
    return powers


def _gi_divisors(g: GaussInt) -> list[GaussInt]:
    """All divisors of g != 0 up to unit multiples."""
    divisors: list[GaussInt] = [(1, 0)]
    for pi, e in _gaussian_prime_powers(g):
        extended = []
        for d in divisors:
            cur = d
            for _ in range(e):
                cur = _gi_mul(cur, pi)
                extended.append(cur)
        divisors.extend(extended)
    return divisors


_UNITS: tuple[GaussInt, ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))


# -- root extraction --------------------------------------------------------


def gaussian_rational_roots(p: Poly) -> list[GaussianRational]:
    """Distinct Gaussian-rational roots of p, sorted by (re, im).

    Complete: every root of p lying in Q(i) is returned; roots outside Q(i)
    are ignored (their existence is visible only through degrees).
    """
    s = squarefree_part(p)
    roots: list[GaussianRational] = []
    if s.is_constant():
        return roots
    if s.coefficient(0).is_zero():
        roots.append(GaussianRational(0))
        s = s // Poly.x()
    if s.is_constant():
        return roots
    # scale x -> y/D so coefficients become Gaussian integers, still monic
    den = 1
    for c in s.coeffs:
        den = den * c.re.denominator // math.gcd(den, int(c.re.denominator))
        den = den * c.im.denominator // math.gcd(den, int(c.im.denominator))
    deg = s.degree()
    int_coeffs: list[GaussInt] = []
    for k, c in enumerate(s.coeffs):
        scale = mpq(den) ** (deg - k)
        re, im = c.re * scale, c.im * scale
        int_coeffs.append((int(re), int(im)))
    c0 = int_coeffs[0]
    for d in _gi_divisors(c0):
        for u in _UNITS:
            z = _gi_mul(d, u)
            acc = (0, 0)
            for coeff in reversed(int_coeffs):
                acc = _gi_mul(acc, z)
                acc = (acc[0] + coeff[0], acc[1] + coeff[1])
            if acc == (0, 0):
                roots.append(GaussianRational(mpq(z[0], den), mpq(z[1], den)))
    roots.sort(key=GaussianRational.sort_key)
    return roots
