"""Exact expansion of generic circulant determinants and permanents, and
minimality / weak Lefschetz analysis of the monomial ideals they support."""

from .cyclotomic import (
    CycloElem,
    bezout,
    binomial,
    cyclotomic_poly,
    divisors,
    euler_phi,
    factorize,
    is_prime_power,
)
from .errors import (
    BudgetExceeded,
    CirculantError,
    ConsistencyError,
    InvalidAction,
    InvalidInput,
    NotRational,
    PrimePowerInput,
    WitnessFailure,
)
from .expand import (
    DEFAULT_TERM_BUDGET,
    CountComparison,
    ExpansionReport,
    WitnessParams,
    coefficient_oracle,
    compare_counts,
    det_brute_force,
    det_expand,
    det_expand_general,
    p_count_formula,
    per_expand,
    per_support,
    per_support_count,
    support_congruence_check,
    vanishing_predicate,
    vanishing_witness,
)
from .poly import (
    SparsePoly,
    exponent_of,
    mul_linear_form,
    multiset_of,
    reduce_coefficients,
)
from .togliatti import (
    BoundCheck,
    GroupAction,
    GTReport,
    RankResult,
    invariant_count,
    invariant_monomials,
    minimality_check,
    scan_square_systems,
    scan_ternary_systems,
    togliatti_bound_check,
    wlp_kernel_witness,
    wlp_rank,
)

__version__ = "0.1.0"
