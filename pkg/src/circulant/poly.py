"""Sparse homogeneous multivariate polynomials.

Coefficients are either CycloElem values (while a product of twisted linear
forms is being accumulated) or plain integers (after reduction).  The only
structural operation the expansion pipeline needs is multiplication by a
linear form, so that is all this module provides; general polynomial
arithmetic is deliberately out of scope.

A degree-d monomial in n variables has two interchangeable encodings:

* exponent vector -- per-variable multiplicities, an n-tuple summing to d;
* sorted multiset -- the weakly increasing length-d tuple of variable
  indices, each index repeated by its multiplicity.

The canonical term order used for every serialization is graded lex with
the exponent vectors compared high-to-low, which coincides with plain
ascending lexicographic order on the sorted multisets.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .cyclotomic import CycloElem, reduce_mod_cyclotomic
from .errors import NotRational

ExponentVec = tuple[int, ...]
Multiset = tuple[int, ...]


def multiset_of(exponents: Sequence[int]) -> Multiset:
    """Sorted index multiset of an exponent vector.

    >>> multiset_of((2, 1, 1, 1, 0, 1))
    (0, 0, 1, 2, 3, 5)
    """
    out = []
    for index, mult in enumerate(exponents):
        if mult < 0:
            raise ValueError(f"negative exponent at index {index}")
        out.extend([index] * mult)
    return tuple(out)


def exponent_of(multiset: Sequence[int], nvars: int) -> ExponentVec:
    """Inverse of multiset_of for a given variable count.

    >>> exponent_of((0, 0, 1, 2, 4, 5), 6)
    (2, 1, 1, 0, 1, 1)
    """
    counts = [0] * nvars
    for index in multiset:
        if not 0 <= index < nvars:
            raise ValueError(f"index {index} out of range for {nvars} variables")
        counts[index] += 1
    return tuple(counts)


class SparsePoly:
    """Homogeneous polynomial as a map from exponent vector to coefficient.

    Instances are immutable by convention: no method mutates `terms`, and
    callers must not either.  Zero coefficients are never stored.
    """

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int,
                 terms: Mapping[ExponentVec, object]):
        if nvars < 1:
            raise ValueError(f"need at least one variable, got {nvars}")
        if degree < 0:
            raise ValueError(f"negative degree {degree}")
        checked = {}
        for exp, coeff in terms.items():
            if len(exp) != nvars or sum(exp) != degree:
                raise ValueError(
                    f"exponent {exp} does not have {nvars} variables of total degree {degree}")
            if isinstance(coeff, CycloElem):
                if coeff.is_zero():
                    continue
            elif coeff == 0:
                continue
            checked[exp] = coeff
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", checked)

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    @classmethod
    def constant(cls, nvars: int, coeff) -> "SparsePoly":
        return cls(nvars, 0, {(0,) * nvars: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return (self.nvars == other.nvars and self.degree == other.degree
                and self.terms == other.terms)

    def __repr__(self) -> str:
        return f"SparsePoly(nvars={self.nvars}, degree={self.degree}, terms={len(self.terms)})"

    def coefficient(self, exponents: ExponentVec):
        """Stored coefficient, or 0 when the monomial is absent."""
        return self.terms.get(tuple(exponents), 0)

    def support(self) -> frozenset[ExponentVec]:
        return frozenset(self.terms)

    def items_sorted(self) -> list[tuple[ExponentVec, object]]:
        """Terms in the canonical graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: multiset_of(kv[0]))

    def evaluate(self, values: Sequence):
        """Evaluate at a point; meaningful for integer-coefficient polynomials."""
        if len(values) != self.nvars:
            raise ValueError(f"expected {self.nvars} values, got {len(values)}")
        total = 0
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, exp):
                if e:
                    term = term * v ** e
            total = total + term
        return total


# ---------------------------------------------------------------------------
# packed-key kernel
#
# During an N-factor product the accumulator maps packed exponent keys to
# mutable coefficient vectors (representatives in Z[x]/(x^order - 1)).
# Packing every exponent into one machine integer keeps the dict small and
# makes "multiply by x_i" a single integer addition.
# ---------------------------------------------------------------------------

PackedTerms = dict[int, list[int]]

# per variable: ((shift, weight), ...) decomposing a CycloElem coefficient
# into weighted rotations
FormPairs = tuple[tuple[tuple[int, int], ...], ...]


def pack_exponents(exponents: Sequence[int], bits: int) -> int:
    key = 0
    for i, e in enumerate(exponents):
        key |= e << (bits * i)
    return key


def unpack_exponents(key: int, nvars: int, bits: int) -> ExponentVec:
    mask = (1 << bits) - 1
    return tuple((key >> (bits * i)) & mask for i in range(nvars))


def form_pairs(coeffs: Sequence[CycloElem]) -> FormPairs:
    """Decompose linear-form coefficients into (root shift, weight) pairs."""
    return tuple(
        tuple((k, w) for k, w in enumerate(c.coeffs) if w) for c in coeffs)


def mul_linear_packed(cur: PackedTerms, pairs: FormPairs, order: int,
                      var_shifts: Sequence[int]) -> PackedTerms:
    """One multiplication step of the accumulator by sum_i coeffs_i * x_i.

    Exact-zero coefficient vectors are pruned from the result; hidden zeros
    (nonzero vectors that reduce to 0 modulo the cyclotomic polynomial) are
    kept and only disappear during integer reduction.
    """
    rot = {}
    for pl in pairs:
        for k, _ in pl:
            if k not in rot:
                rot[k] = [(t - k) % order for t in range(order)]
    nxt: PackedTerms = {}
    get = nxt.get
    live = [(i, pl) for i, pl in enumerate(pairs) if pl]
    for key, vec in cur.items():
        for i, pl in live:
            nk = key + var_shifts[i]
            dst = get(nk)
            if len(pl) == 1:
                k, w = pl[0]
                idx = rot[k]
                if dst is None:
                    if w == 1:
                        nxt[nk] = [vec[s] for s in idx]
                    else:
                        nxt[nk] = [w * vec[s] for s in idx]
                elif w == 1:
                    for t, s in enumerate(idx):
                        dst[t] += vec[s]
                else:
                    for t, s in enumerate(idx):
                        dst[t] += w * vec[s]
            else:
                if dst is None:
                    dst = [0] * order
                    nxt[nk] = dst
                for k, w in pl:
                    idx = rot[k]
                    if w == 1:
                        for t, s in enumerate(idx):
                            dst[t] += vec[s]
                    else:
                        for t, s in enumerate(idx):
                            dst[t] += w * vec[s]
    return {k: v for k, v in nxt.items() if any(v)}


def _coerce_order(p: SparsePoly, coeffs: Sequence[CycloElem]) -> int:
    orders = {c.order for c in coeffs}
    for c in p.terms.values():
        if not isinstance(c, CycloElem):
            raise TypeError("mul_linear_form needs cyclotomic coefficients")
        orders.add(c.order)
    if len(orders) != 1:
        raise ValueError(f"mixed root orders {sorted(orders)}")
    return orders.pop()


def mul_linear_form(p: SparsePoly, coeffs: Sequence[CycloElem]) -> SparsePoly:
    """Product p * (sum_i coeffs_i * x_i), homogeneous of degree deg(p) + 1."""
    if len(coeffs) != p.nvars:
        raise ValueError(
            f"linear form has {len(coeffs)} coefficients for {p.nvars} variables")
    new_degree = p.degree + 1
    if p.is_zero():
        return SparsePoly(p.nvars, new_degree, {})
    order = _coerce_order(p, coeffs)
    bits = max(new_degree.bit_length(), 1)
    shifts = [1 << (bits * i) for i in range(p.nvars)]
    cur = {pack_exponents(e, bits): list(c.coeffs) for e, c in p.terms.items()}
    nxt = mul_linear_packed(cur, form_pairs(coeffs), order, shifts)
    out = {
        unpack_exponents(k, p.nvars, bits): CycloElem(order, tuple(v))
        for k, v in nxt.items()
    }
    return SparsePoly(p.nvars, new_degree, out)


def reduce_coefficients(p: SparsePoly) -> SparsePoly:
    """Collapse cyclotomic coefficients to the rational integers they are.

    Terms whose coefficient reduces to 0 are removed.  A coefficient that is
    not a rational integer raises NotRational carrying the offending
    exponent vector; for circulant expansions that is an internal bug.
    """
    out = {}
    for exp, coeff in p.terms.items():
        if isinstance(coeff, int):
            value = coeff
        else:
            try:
                value = coeff.to_int()
            except NotRational as exc:
                raise NotRational(exc.order, exc.remainder, exponent=exp) from None
        if value:
            out[exp] = value
    return SparsePoly(p.nvars, p.degree, out)
