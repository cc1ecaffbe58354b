"""Exact arithmetic with roots of unity, plus small number-theory helpers.

A primitive N-th root of unity is represented symbolically as the class of
x in Z[x]/(x^N - 1): an element is just a length-N integer vector, and
multiplication is cyclic convolution.  No floating-point root ever enters
an exact code path.  Reduction to a rational integer happens at the very
end, by exact division modulo the N-th cyclotomic polynomial.

All values are immutable and all functions are pure, so they can be shared
freely between concurrent workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import NotRational

# Dense integer polynomial, lowest degree first, no trailing zeros.
IntPoly = tuple[int, ...]


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as ((p, multiplicity), ...), p ascending.

    >>> factorize(12)
    ((2, 2), (3, 1))
    """
    if n < 1:
        raise ValueError(f"factorize expects n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            r = 0
            while n % p == 0:
                n //= p
                r += 1
            out.append((p, r))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n >= 1."""
    if n < 1:
        raise ValueError(f"divisors expects n >= 1, got {n}")
    divs = [1]
    for p, r in factorize(n):
        divs = [d * p ** k for d in divs for k in range(r + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    """Count of integers in 1..n coprime to n."""
    if n < 1:
        raise ValueError(f"euler_phi expects n >= 1, got {n}")
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def bezout(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def is_prime_power(n: int) -> tuple[int, int] | None:
    """(p, r) with n == p**r, p prime, r >= 1; None otherwise (including n=1)."""
    if n < 1:
        raise ValueError(f"is_prime_power expects n >= 1, got {n}")
    fac = factorize(n)
    if len(fac) == 1:
        return fac[0]
    return None


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient with the usual domain restriction."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binomial expects 0 <= k <= n, got n={n}, k={k}")
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# dense integer polynomials and the cyclotomic family
# ---------------------------------------------------------------------------

def poly_trim(coeffs: Sequence[int]) -> IntPoly:
    """Strip trailing zero coefficients; the zero polynomial becomes ()."""
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def poly_mul(a: Sequence[int], b: Sequence[int]) -> IntPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return poly_trim(out)


def poly_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[IntPoly, IntPoly]:
    """Long division a = q*b + r over the integers.

    Every intermediate leading coefficient must be divisible by the divisor's
    leading coefficient (always true for monic divisors such as the
    cyclotomic polynomials); otherwise a ValueError is raised.
    """
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(poly_trim(a))
    lead = b[-1]
    db = len(b) - 1
    quot = [0] * max(len(rem) - db, 0)
    for k in range(len(rem) - 1, db - 1, -1):
        c = rem[k]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            raise ValueError(f"inexact polynomial division: {c} by {lead}")
        quot[k - db] = q
        for t in range(db + 1):
            rem[k - db + t] -= q * b[t]
    return poly_trim(quot), poly_trim(rem)


def poly_div_exact(a: Sequence[int], b: Sequence[int]) -> IntPoly:
    """Quotient a / b, asserting the remainder vanishes."""
    q, r = poly_divmod(a, b)
    if r:
        raise ValueError(f"polynomial division left remainder {r}")
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> IntPoly:
    """The n-th cyclotomic polynomial, monic of degree euler_phi(n).

    Computed by exact division of x^n - 1 by the product of the cyclotomic
    polynomials of the proper divisors of n.

    >>> cyclotomic_poly(2)
    (1, 1)
    >>> cyclotomic_poly(6)
    (1, -1, 1)
    """
    if n < 1:
        raise ValueError(f"cyclotomic_poly expects n >= 1, got {n}")
    poly: IntPoly = (-1,) + (0,) * (n - 1) + (1,)  # x^n - 1
    for d in divisors(n)[:-1]:
        poly = poly_div_exact(poly, cyclotomic_poly(d))
    assert poly[-1] == 1 and len(poly) - 1 == euler_phi(n)
    return poly


def reduce_mod_cyclotomic(order: int, vec: Sequence[int]) -> int:
    """Reduce a Z[x]/(x^order - 1) representative modulo the cyclotomic
    polynomial of that order; return the constant it collapses to.

    Raises NotRational when the residue is not a constant, i.e. the element
    is not a rational integer.
    """
    phi = cyclotomic_poly(order)
    deg = len(phi) - 1
    rem = list(vec)
    for k in range(len(rem) - 1, deg - 1, -1):
        c = rem[k]
        if c:
            rem[k] = 0
            base = k - deg
            for t in range(deg):
                rem[base + t] -= c * phi[t]
    if any(rem[1:]):
        raise NotRational(order, poly_trim(rem))
    return rem[0] if rem else 0


# ---------------------------------------------------------------------------
# cyclotomic integers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CycloElem:
    """An element of Z[x]/(x^order - 1); coeffs[k] multiplies zeta^k."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"order must be positive, got {self.order}")
        if len(self.coeffs) != self.order:
            raise ValueError(
                f"coefficient vector has length {len(self.coeffs)}, expected {self.order}")

    @classmethod
    def zero(cls, order: int) -> "CycloElem":
        return cls(order, (0,) * order)

    @classmethod
    def from_int(cls, order: int, value: int) -> "CycloElem":
        return cls(order, (value,) + (0,) * (order - 1))

    @classmethod
    def one(cls, order: int) -> "CycloElem":
        return cls.from_int(order, 1)

    @classmethod
    def root(cls, order: int, k: int = 1) -> "CycloElem":
        """zeta^k for the canonical primitive root of the given order."""
        k %= order
        return cls(order, tuple(1 if i == k else 0 for i in range(order)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check_order(self, other: "CycloElem"):
        if self.order != other.order:
            raise ValueError(f"order mismatch: {self.order} != {other.order}")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycloElem.from_int(self.order, other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        self._check_order(other)
        return CycloElem(self.order,
                         tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElem(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycloElem.from_int(self.order, other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        self._check_order(other)
        return CycloElem(self.order,
                         tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Cyclic convolution of coefficient vectors (indices mod order)."""
        if isinstance(other, int):
            if other == 0:
                return CycloElem.zero(self.order)
            return CycloElem(self.order, tuple(c * other for c in self.coeffs))
        if not isinstance(other, CycloElem):
            return NotImplemented
        self._check_order(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        # convolve with the sparser operand outermost
        if sum(1 for c in a if c) > sum(1 for c in b if c):
            a, b = b, a
        out = [0] * n
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        if k >= n:
                            k -= n
                        out[k] += ai * bj
        return CycloElem(n, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> "CycloElem":
        """Complex conjugation, zeta -> zeta^(-1)."""
        n = self.order
        return CycloElem(n, tuple(self.coeffs[(-i) % n] for i in range(n)))

    def to_int(self) -> int:
        """The rational integer this element represents.

        Raises NotRational when the element does not lie in Z; for the
        coefficients produced by determinant expansion that would signal an
        internal consistency failure.
        """
        return reduce_mod_cyclotomic(self.order, self.coeffs)
