"""Symbolic expansion of generic circulant determinants and permanents.

The determinant of the generic circulant in x_0..x_{N-1} is the product of
its N eigenforms sum_i zeta^{j*i} x_i (j = 0..N-1, zeta a primitive N-th
root of unity); the generalization det_expand_general expands the d x d
circulant whose first row carries x_i at position alpha_i.  Everything is
exact: coefficients live in Z[x]/(x^order - 1) during the product and are
reduced to rational integers at the end.

The permanent side is handled three independent ways -- factorial
enumeration (per_expand), lattice-point enumeration of the supporting
multisets (per_support / per_support_count) and the divisor-sum closed
formula (p_count_formula) -- so each route can vouch for the others.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .cyclotomic import (
    bezout,
    binomial,
    euler_phi,
    divisors,
    factorize,
    is_prime_power,
    reduce_mod_cyclotomic,
)
from .errors import (
    BudgetExceeded,
    ConsistencyError,
    InvalidInput,
    NotRational,
    PrimePowerInput,
)
from .poly import (
    Multiset,
    exponent_of,
    mul_linear_packed,
    multiset_of,
    pack_exponents,
    unpack_exponents,
)

#: Expansion refuses inputs whose full monomial count C(nvars+d-1, d) would
#: exceed this many terms (the square case bound is C(2N-1, N), so the
#: default accommodates N <= 12).
DEFAULT_TERM_BUDGET = 5_000_000

PER_EXPAND_MAX = 10       # factorial enumeration
BRUTE_FORCE_MAX = 8       # signed factorial enumeration
ORACLE_MAX = 16           # inclusion-exclusion per-coefficient route


@dataclass(frozen=True)
class ExpansionReport:
    """Expanded polynomial with terms keyed by sorted index multiset.

    `alpha` records the first-row positions of the variables: for the
    square generic circulant it is (0, 1, ..., N-1).  Terms are stored in
    canonical order (ascending multisets) with nonzero signed coefficients.
    """

    nvars: int
    degree: int
    alpha: tuple[int, ...]
    terms: tuple[tuple[Multiset, int], ...]

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @cached_property
    def _lookup(self) -> dict[Multiset, int]:
        return dict(self.terms)

    def coefficient(self, multiset) -> int:
        return self._lookup.get(tuple(multiset), 0)

    def support(self) -> frozenset[Multiset]:
        return frozenset(self._lookup)

    def coefficient_sum(self) -> int:
        return sum(c for _, c in self.terms)


def _term_bound(nvars: int, degree: int) -> int:
    return binomial(nvars + degree - 1, degree)


def _check_budget(nvars: int, degree: int, budget: int | None) -> None:
    limit = DEFAULT_TERM_BUDGET if budget is None else budget
    if limit < 1:
        raise InvalidInput(f"term budget must be positive, got {limit}")
    needed = _term_bound(nvars, degree)
    if needed > limit:
        raise BudgetExceeded(
            f"expansion may reach {needed} terms, above the budget of {limit}",
            needed=needed, budget=limit)


def _expand_linear_product(degree: int, alpha: tuple[int, ...], order: int,
                           j_range) -> dict[int, list[int]]:
    """Packed product of the twisted linear forms for j in j_range."""
    nvars = len(alpha)
    bits = max(degree.bit_length(), 1)
    shifts = [1 << (bits * i) for i in range(nvars)]
    cur = {0: [1] + [0] * (order - 1)}
    for j in j_range:
        pairs = tuple(((j * a % order, 1),) for a in alpha)
        cur = mul_linear_packed(cur, pairs, order, shifts)
    return cur


def _reduce_packed(cur: dict[int, list[int]], nvars: int, degree: int,
                   order: int) -> list[tuple[Multiset, int]]:
    bits = max(degree.bit_length(), 1)
    out = []
    for key, vec in cur.items():
        exp = unpack_exponents(key, nvars, bits)
        try:
            value = reduce_mod_cyclotomic(order, vec)
        except NotRational as exc:
            raise NotRational(exc.order, exc.remainder, exponent=exp) from None
        if value:
            out.append((multiset_of(exp), value))
    out.sort()
    return out


@lru_cache(maxsize=64)
def _det_general_cached(degree: int, alpha: tuple[int, ...]) -> ExpansionReport:
    cur = _expand_linear_product(degree, alpha, degree, range(degree))
    terms = _reduce_packed(cur, len(alpha), degree, degree)
    return ExpansionReport(nvars=len(alpha), degree=degree, alpha=alpha,
                           terms=tuple(terms))


def det_expand_general(degree: int, alpha, *, budget: int | None = None
                       ) -> ExpansionReport:
    """Exact expansion of the determinant of the d x d circulant whose first
    row places x_i at position alpha_i (strictly increasing, 0..d)."""
    alpha = tuple(int(a) for a in alpha)
    nvars = len(alpha)
    if nvars < 2:
        raise InvalidInput(f"need at least 2 variables, got {nvars}")
    if degree < nvars:
        raise InvalidInput(f"degree {degree} is below the variable count {nvars}")
    if alpha[0] < 0 or alpha[-1] > degree:
        raise InvalidInput(f"positions {alpha} out of range 0..{degree}")
    if any(a >= b for a, b in zip(alpha, alpha[1:])):
        raise InvalidInput(f"positions {alpha} must be strictly increasing")
    if len({a % degree for a in alpha}) != nvars:
        raise InvalidInput(f"positions {alpha} collide modulo {degree}")
    _check_budget(nvars, degree, budget)
    return _det_general_cached(degree, alpha)


def det_expand(n: int, *, budget: int | None = None) -> ExpansionReport:
    """Exact expansion of det Circ(x_0, ..., x_{n-1})."""
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    if n == 1:
        return ExpansionReport(nvars=1, degree=1, alpha=(0,),
                               terms=(((0,), 1),))
    return det_expand_general(n, tuple(range(n)), budget=budget)


# ---------------------------------------------------------------------------
# permutation enumeration (oracle routes)
# ---------------------------------------------------------------------------

def _permutation_sign(perm) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _permutation_terms(n: int, signed: bool) -> tuple[tuple[Multiset, int], ...]:
    counts: dict[Multiset, int] = {}
    for perm in itertools.permutations(range(n)):
        key = tuple(sorted((perm[i] - i) % n for i in range(n)))
        weight = _permutation_sign(perm) if signed else 1
        counts[key] = counts.get(key, 0) + weight
    return tuple(sorted((k, v) for k, v in counts.items() if v))


def per_expand(n: int) -> ExpansionReport:
    """Exact permanent expansion by summing over all n! permutations."""
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    if n > PER_EXPAND_MAX:
        raise BudgetExceeded(
            f"permanent enumeration is limited to n <= {PER_EXPAND_MAX}, got {n}",
            needed=n, budget=PER_EXPAND_MAX)
    return ExpansionReport(nvars=n, degree=n, alpha=tuple(range(n)),
                           terms=_permutation_terms(n, signed=False))


def det_brute_force(n: int) -> ExpansionReport:
    """Signed permutation-sum expansion; the independent oracle for det_expand."""
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    if n > BRUTE_FORCE_MAX:
        raise BudgetExceeded(
            f"signed enumeration is limited to n <= {BRUTE_FORCE_MAX}, got {n}",
            needed=n, budget=BRUTE_FORCE_MAX)
    return ExpansionReport(nvars=n, degree=n, alpha=tuple(range(n)),
                           terms=_permutation_terms(n, signed=True))


# ---------------------------------------------------------------------------
# permanent support without factorials
# ---------------------------------------------------------------------------

@lru_cache(maxsize=32)
def _support_table(n: int) -> list[list[list[int]]]:
    """count[i][r][rho] = number of ways to pick multiplicities for variables
    i..n-1 totalling r with weighted index sum rho + sum(k*M_k) = 0 mod n."""
    count = [[[0] * n for _ in range(n + 1)] for _ in range(n + 1)]
    count[n][0][0] = 1
    for i in range(n - 1, -1, -1):
        for r in range(n + 1):
            for rho in range(n):
                total = 0
                for m in range(r + 1):
                    total += count[i + 1][r - m][(rho + i * m) % n]
                count[i][r][rho] = total
    return count


def per_support_count(n: int) -> int:
    """|per_support(n)| by dynamic programming, no enumeration, no formula."""
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    return _support_table(n)[0][n][0]


@lru_cache(maxsize=8)
def per_support(n: int) -> frozenset[Multiset]:
    """Multisets supporting the generic permanent: the solutions, in the
    multiplicity encoding, of sum(M_i) = n with sum(i*M_i) = 0 mod n.

    The walk is guided by the counting table, so only branches containing a
    solution are ever entered.
    """
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    table = _support_table(n)
    out: list[Multiset] = []
    prefix: list[int] = []

    def walk(i: int, rem: int, rho: int):
        if i == n:
            out.append(tuple(prefix))
            return
        nxt = table[i + 1]
        for m in range(rem + 1):
            if nxt[rem - m][(rho + i * m) % n]:
                prefix.extend([i] * m)
                walk(i + 1, rem - m, (rho + i * m) % n)
                del prefix[len(prefix) - m:]

    walk(0, n, 0)
    return frozenset(out)


def p_count_formula(n: int) -> int:
    """Closed-form permanent term count: (1/n) * sum over k | n of
    euler_phi(n/k) * C(2k-1, k).  The division must be exact."""
    if n < 1:
        raise InvalidInput(f"order must be positive, got {n}")
    total = sum(euler_phi(n // k) * binomial(2 * k - 1, k) for k in divisors(n))
    quotient, rest = divmod(total, n)
    if rest:
        raise ConsistencyError(
            f"divisor sum {total} is not a multiple of {n}")
    return quotient


# ---------------------------------------------------------------------------
# per-coefficient oracle
# ---------------------------------------------------------------------------

def _check_multiset(n: int, multiset) -> Multiset:
    m = tuple(int(a) for a in multiset)
    if len(m) != n:
        raise InvalidInput(f"multiset {m} does not have degree {n}")
    if any(not 0 <= a < n for a in m):
        raise InvalidInput(f"multiset {m} has entries outside 0..{n - 1}")
    if any(a > b for a, b in zip(m, m[1:])):
        raise InvalidInput(f"multiset {m} is not sorted")
    return m


def coefficient_oracle(n: int, multiset) -> int:
    """Determinant-expansion coefficient of one monomial, independently of
    the full expansion.

    The coefficient of prod x_i^{M_i} equals the permanent of the n x n
    root-of-unity matrix whose columns repeat column a with multiplicity
    M_a, divided by prod M_i!.  The permanent is evaluated by
    inclusion-exclusion over column sub-multiplicities, entirely in exact
    cyclotomic arithmetic.
    """
    m = _check_multiset(n, multiset)
    if n > ORACLE_MAX:
        raise InvalidInput(f"coefficient oracle is limited to n <= {ORACLE_MAX}")
    values: list[int] = []
    mults: list[int] = []
    for a in m:
        if values and values[-1] == a:
            mults[-1] += 1
        else:
            values.append(a)
            mults.append(1)
    total = [0] * n
    for svec in itertools.product(*(range(mu + 1) for mu in mults)):
        s = sum(svec)
        if s == 0:
            continue
        weight = 1
        for mu, sv in zip(mults, svec):
            weight *= binomial(mu, sv)
        if (n - s) % 2:
            weight = -weight
        # row j of the selected columns sums to sum_t s_t * zeta^{j*a_t}
        prod = [0] * n
        prod[0] = s  # row j = 0
        for j in range(1, n):
            row = [0] * n
            for a, sv in zip(values, svec):
                if sv:
                    row[j * a % n] += sv
            nxt = [0] * n
            for i, ri in enumerate(row):
                if ri:
                    for k, pk in enumerate(prod):
                        if pk:
                            t = i + k
                            if t >= n:
                                t -= n
                            nxt[t] += ri * pk
            prod = nxt
            if not any(prod):
                break
        else:
            for k in range(n):
                if prod[k]:
                    total[k] += weight * prod[k]
    permanent = reduce_mod_cyclotomic(n, total)
    denom = 1
    for mu in mults:
        for f in range(2, mu + 1):
            denom *= f
    quotient, rest = divmod(permanent, denom)
    if rest:
        raise ConsistencyError(
            f"permanent {permanent} is not divisible by {denom} for multiset {m}")
    return quotient


# ---------------------------------------------------------------------------
# support predicates
# ---------------------------------------------------------------------------

def support_congruence_check(n: int, multiset) -> bool:
    """True iff the index sum vanishes mod n -- the necessary condition for a
    nonzero determinant coefficient (and sufficient when n is a prime power)."""
    m = _check_multiset(n, multiset)
    return sum(m) % n == 0


def vanishing_predicate(n: int, multiset) -> bool:
    """Sufficient condition for a zero determinant coefficient on multisets
    shaped 0^{M0} 1^{M1} a b c with M0, M1 >= 1.

    Requires n | (M1+1)(M1+2) together with one of two arithmetic patterns
    on the top three entries.  The two branches are checked verbatim as an
    OR; no disjointness is assumed.  The condition is one-sided: multisets
    it rejects may still have zero coefficients.
    """
    m = _check_multiset(n, multiset)
    m0 = sum(1 for a in m if a == 0)
    m1 = sum(1 for a in m if a == 1)
    top = [a for a in m if a >= 2]
    if m0 < 1 or m1 < 1 or len(top) != 3:
        return False
    a1, a2, a3 = top
    if (m1 + a1 + a2 + a3) % n:
        return False
    q1, r1 = divmod((m1 + 1) * (m1 + 2), n)
    if r1:
        return False
    branch_low = (a1 <= a2 < n - m1
                  and a1 + a2 == n + 1 - q1
                  and a3 == m0 + 2 + q1)
    q0, r0 = divmod((m0 + 1) * (m0 + 2), n)
    branch_high = (r0 == 0
                   and n - m1 <= a2 <= a1
                   and a2 + a3 == n + 1 + q0
                   and a1 == m0 + 2 - q0)
    return branch_low or branch_high


# ---------------------------------------------------------------------------
# constructive witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessParams:
    """Parameters of the vanishing-coefficient construction for a composite
    non-prime-power order: order = n * m with coprime 1 < n < m, and
    lam * m = 1 + mu * n the minimal positive solution."""

    order: int
    n: int
    m: int
    lam: int
    mu: int
    m0: int
    m1: int
    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        if self.n * self.m != self.order or not 1 < self.n < self.m:
            raise ConsistencyError(f"invalid split {self.n} * {self.m} of {self.order}")
        if bezout(self.n, self.m)[0] != 1:
            raise ConsistencyError(f"split {self.n}, {self.m} is not coprime")
        if self.lam < 1 or self.mu < 1 or self.lam * self.m != 1 + self.mu * self.n:
            raise ConsistencyError("Bezout normalization violated")
        if self.lam * self.m > self.order:
            raise ConsistencyError("lam * m exceeds the order")
        nm, mun = self.order, self.mu * self.n
        checks = (
            self.m1 == mun - 1,
            self.m0 == nm - mun - 2,
            self.a2 == nm - mun,
            self.a1 == mun - self.mu * self.lam + 1,
            self.a3 == nm - mun + self.lam * self.mu,
            (self.m1 + 1) * (self.m1 + 2) % nm == 0,
            self.m0 >= 1,
            2 <= self.a1 <= self.a2 < self.a3 <= nm - 1,
        )
        if not all(checks):
            raise ConsistencyError(f"witness parameter identities failed: {self}")

    def multiset(self) -> Multiset:
        return (0,) * self.m0 + (1,) * self.m1 + (self.a1, self.a2, self.a3)


def _coprime_split(order: int) -> tuple[int, int]:
    """Split order = n * m, gcd(n, m) = 1, 1 < n < m, with n the smallest
    prime-power factor (swapped if needed to keep n < m)."""
    fac = factorize(order)
    if len(fac) < 2:
        raise PrimePowerInput(
            f"{order} admits no coprime split into factors > 1")
    p, r = fac[0]
    n = p ** r
    m = order // n
    if n > m:
        n, m = m, n
    return n, m


def vanishing_witness(order: int) -> tuple[WitnessParams, Multiset]:
    """A multiset supported by the permanent whose determinant coefficient is
    zero; exists exactly when the order is not a prime power.

    The returned multiset is verified on the spot: it satisfies the support
    congruence and the vanishing predicate, and (for orders the oracle can
    reach) coefficient_oracle confirms the zero.
    """
    if order < 1:
        raise InvalidInput(f"order must be positive, got {order}")
    if order == 1 or is_prime_power(order):
        raise PrimePowerInput(f"{order} is 1 or a prime power; no witness exists")
    n, m = _coprime_split(order)
    # minimal positive lam with lam * m = 1 (mod n)
    g, _, t = bezout(n, m)
    assert g == 1
    lam = t % n
    mu = (lam * m - 1) // n
    mun = mu * n
    params = WitnessParams(
        order=order, n=n, m=m, lam=lam, mu=mu,
        m0=order - mun - 2, m1=mun - 1,
        a1=mun - mu * lam + 1, a2=order - mun, a3=order - mun + lam * mu)
    witness = params.multiset()
    if not support_congruence_check(order, witness):
        raise ConsistencyError(f"witness {witness} fails the support congruence")
    if not vanishing_predicate(order, witness):
        raise ConsistencyError(f"witness {witness} fails the vanishing predicate")
    if order <= ORACLE_MAX and coefficient_oracle(order, witness) != 0:
        raise ConsistencyError(f"witness {witness} has a nonzero coefficient")
    return params, witness


# ---------------------------------------------------------------------------
# the equality criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountComparison:
    """Determinant vs permanent term counts for one order."""

    n: int
    d: int
    p: int
    equal: bool
    prime_power: bool


def compare_counts(n: int, *, budget: int | None = None) -> CountComparison:
    """d(n) by full expansion against p(n) by formula (cross-checked with the
    lattice count).  Equality must coincide with n being a prime power for
    n >= 2; a mismatch is an internal failure, not a result."""
    d_count = det_expand(n, budget=budget).term_count
    p_count = p_count_formula(n)
    p_lattice = per_support_count(n)
    if p_count != p_lattice:
        raise ConsistencyError(
            f"formula p({n}) = {p_count} disagrees with lattice count {p_lattice}")
    equal = d_count == p_count
    prime_power = is_prime_power(n) is not None
    if n >= 2 and equal != prime_power:
        raise ConsistencyError(
            f"equality criterion violated at n = {n}: d = {d_count}, p = {p_count}")
    return CountComparison(n=n, d=d_count, p=p_count, equal=equal,
                           prime_power=prime_power)
