import math
from fractions import Fraction

import numpy as np
import pytest

from circulant.cyclotomic import binomial, is_prime_power
from circulant.errors import InvalidAction
from circulant.expand import (
    compare_counts,
    det_expand,
    det_expand_general,
    p_count_formula,
    per_support,
)
from circulant.poly import exponent_of, multiset_of, reduce_coefficients, mul_linear_form
from circulant.cyclotomic import CycloElem
from circulant.togliatti import (
    GroupAction,
    invariant_count,
    invariant_monomials,
    minimality_check,
    scan_square_systems,
    scan_ternary_systems,
    togliatti_bound_check,
    wlp_kernel_witness,
    wlp_rank,
)

from data import VANISHING6

TOGLIATTI_CUBIC = GroupAction(3, (0, 1, 2))


def test_group_action_validation():
    with pytest.raises(InvalidAction):
        GroupAction(5, (0, 0, 0))  # gcd(0, 0, 0, 5) = 5
    with pytest.raises(InvalidAction):
        GroupAction(2, (0, 1, 2))  # order too small
    with pytest.raises(InvalidAction):
        GroupAction(4, (0, 1))  # too few variables
    GroupAction(6, (0, 2, 3))  # gcd 1 through mixed exponents


def test_invariant_monomials_togliatti_cubic():
    mons = invariant_monomials(TOGLIATTI_CUBIC)
    assert set(mons) == {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}
    # graded-lex order
    assert list(mons) == sorted(mons, key=multiset_of)


def test_invariant_monomials_contain_pure_powers():
    for action in (GroupAction(4, (0, 1, 3)), GroupAction(6, (0, 1, 5)),
                   GroupAction(5, (0, 2, 3, 4))):
        mons = set(invariant_monomials(action))
        n, d = action.nvars, action.degree
        for i in range(n):
            pure = tuple(d if j == i else 0 for j in range(n))
            assert pure in mons


def test_invariance_is_per_monomial():
    for action in (TOGLIATTI_CUBIC, GroupAction(6, (0, 1, 5)),
                   GroupAction(7, (0, 2, 3, 5))):
        d = action.degree
        for e in invariant_monomials(action):
            assert sum(e) == d
            assert sum(a * x for a, x in zip(action.exponents, e)) % d == 0


def test_invariant_count_matches_enumeration():
    for action in (TOGLIATTI_CUBIC, GroupAction(5, (0, 1, 2, 3, 4)),
                   GroupAction(8, (0, 3, 5)), GroupAction(6, (0, 2, 3))):
        assert invariant_count(action) == len(invariant_monomials(action))


def test_square_invariants_equal_permanent_support():
    for n in range(3, 13):
        action = GroupAction(n, tuple(range(n)))
        invariants = {multiset_of(e) for e in invariant_monomials(action)}
        assert invariants == per_support(n)


def test_togliatti_bound_check():
    check3 = togliatti_bound_check(TOGLIATTI_CUBIC)
    assert (check3.mu, check3.bound, check3.ok) == (4, 4, True)
    check6 = togliatti_bound_check(GroupAction(6, tuple(range(6))))
    assert (check6.mu, check6.bound, check6.ok) == (80, 210, True)


def test_kernel_witness_togliatti_cubic():
    partial = wlp_kernel_witness(TOGLIATTI_CUBIC)
    assert partial.degree == 2 and len(partial) > 0
    ell = [CycloElem.one(3)] * 3
    product = reduce_coefficients(mul_linear_form(partial, ell))
    assert product.support() == {(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)}


def test_kernel_witness_product_is_determinant():
    # ell times the witness equals the circulant determinant term by term,
    # across every three-variable action with d <= 8 and a spread of
    # four-variable ones
    import math

    actions = [GroupAction(d, (0, n, m))
               for d in range(3, 9) for n in range(1, d)
               for m in range(n + 1, d) if math.gcd(math.gcd(n, m), d) == 1]
    actions += [GroupAction(4, tuple(range(4))), GroupAction(5, (0, 1, 2, 4)),
                GroupAction(8, (0, 1, 3, 4)), GroupAction(7, (0, 2, 3, 6))]
    for action in actions:
        partial = wlp_kernel_witness(action)
        ell = [CycloElem.one(action.degree)] * action.nvars
        product = reduce_coefficients(mul_linear_form(partial, ell))
        expected = det_expand_general(action.degree, action.exponents)
        got = sorted((multiset_of(e), c) for e, c in product.terms.items())
        assert got == list(expected.terms)


def test_witness_support_derived_action():
    # exponents (0, 1, 3) of order 4: products supported on e_1 + 3 e_2 = 0 (mod 4)
    action = GroupAction(4, (0, 1, 3))
    partial = wlp_kernel_witness(action)
    ell = [CycloElem.one(4)] * 3
    product = reduce_coefficients(mul_linear_form(partial, ell))
    for e in product.terms:
        assert (e[1] + 3 * e[2]) % 4 == 0


def _fraction_rank(rows, ncols):
    matrix = [[Fraction(row.get(c, 0)) for c in range(ncols)] for row in rows]
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(matrix)) if matrix[r][col]), None)
        if pivot is None:
            continue
        matrix[rank], matrix[pivot] = matrix[pivot], matrix[rank]
        lead = matrix[rank][col]
        for r in range(len(matrix)):
            if r != rank and matrix[r][col]:
                f = matrix[r][col] / lead
                matrix[r] = [a - f * b for a, b in zip(matrix[r], matrix[rank])]
        rank += 1
    return rank


def test_wlp_rank_togliatti_cubic():
    result = wlp_rank(TOGLIATTI_CUBIC)
    assert result.source_dim == 6
    assert result.target_dim == 6
    assert result.rank == 5
    assert not result.injective


def test_wlp_rank_against_dense_oracle():
    # rebuild the multiplication matrix from scratch and rank it two more
    # independent ways (dense rationals, floating SVD)
    for action in (TOGLIATTI_CUBIC, GroupAction(4, (0, 1, 3)),
                   GroupAction(5, (0, 1, 2)), GroupAction(4, tuple(range(4)))):
        n, d = action.nvars, action.degree
        invariants = set(invariant_monomials(action))

        def monomials(nv, deg):
            if nv == 1:
                return [(deg,)]
            out = []
            for e in range(deg, -1, -1):
                out.extend((e,) + rest for rest in monomials(nv - 1, deg - e))
            return out

        sources = monomials(n, d - 1)
        targets = [e for e in monomials(n, d) if e not in invariants]
        tindex = {e: i for i, e in enumerate(targets)}
        rows = []
        for s in sources:
            row = {}
            for i in range(n):
                t = s[:i] + (s[i] + 1,) + s[i + 1:]
                if t in tindex:
                    row[tindex[t]] = 1
            rows.append(row)
        expected = _fraction_rank(rows, len(targets))
        dense = np.zeros((len(sources), len(targets)))
        for r, row in enumerate(rows):
            for c in row:
                dense[r, c] = 1.0
        result = wlp_rank(action)
        assert result.rank == expected
        assert result.rank == np.linalg.matrix_rank(dense)
        assert result.source_dim == len(sources) == binomial(n + d - 2, n - 1)
        assert result.target_dim == len(targets)


def test_wlp_rank_square_order_four():
    result = wlp_rank(GroupAction(4, tuple(range(4))))
    assert result.source_dim == 20
    assert result.target_dim == 25
    assert result.rank <= 19
    assert not result.injective


def test_minimality_togliatti_cubic():
    report = minimality_check(TOGLIATTI_CUBIC)
    assert report.minimal
    assert report.missing_monomials == ()
    assert report.mu == 4 and report.togliatti_bound == 4 and report.bound_satisfied
    assert report.wlp_witness_verified
    assert (report.rank, report.source_dim, report.target_dim) == (5, 6, 6)
    assert report.injective is False


def test_minimality_square_six():
    report = minimality_check(GroupAction(6, tuple(range(6))))
    assert not report.minimal
    missing = {multiset_of(e) for e in report.missing_monomials}
    assert missing == VANISHING6
    assert report.rank is not None and report.rank < report.source_dim


def test_minimality_square_eight():
    report = minimality_check(GroupAction(8, tuple(range(8))),
                              rank_dim_limit=0)
    assert report.minimal
    assert report.mu == 810 == p_count_formula(8)
    assert report.rank is None and report.injective is None


def test_minimality_requires_increasing_exponents():
    with pytest.raises(InvalidAction):
        minimality_check(GroupAction(4, (0, 3, 1)))


def test_minimality_matches_count_equality():
    for n in range(3, 10):
        report = minimality_check(GroupAction(n, tuple(range(n))),
                                  rank_dim_limit=100)
        counts = compare_counts(n)
        assert report.minimal == counts.equal
        assert len(report.missing_monomials) == counts.p - counts.d


def test_witness_and_rank_agree():
    for action in (TOGLIATTI_CUBIC, GroupAction(4, (0, 1, 3)),
                   GroupAction(6, (0, 1, 5)), GroupAction(5, tuple(range(5))),
                   GroupAction(7, (0, 2, 5))):
        wlp_kernel_witness(action)  # raises on failure
        assert not wlp_rank(action).injective


def test_scan_square_systems():
    rows = scan_square_systems(7)
    assert [r.n for r in rows] == list(range(3, 8))
    for row in rows:
        assert row.consistent
        assert row.prime_power == (is_prime_power(row.n) is not None)
    assert not next(r for r in rows if r.n == 6).minimal
    assert next(r for r in rows if r.n == 7).minimal


def test_scan_square_systems_parallel_matches_serial():
    assert scan_square_systems(6, workers=2) == scan_square_systems(6)


def test_scan_ternary_systems():
    rows = scan_ternary_systems(7)
    cells = {(r.d, r.n, r.m) for r in rows}
    assert (3, 1, 2) in cells and (5, 1, 2) in cells
    assert (6, 2, 4) not in cells  # gcd(2, 4, 6) = 2 excluded
    for row in rows:
        assert row.minimal and row.missing_count == 0


def test_gt_report_criterion_label():
    report = minimality_check(TOGLIATTI_CUBIC)
    assert "invariant monomial" in report.criterion
