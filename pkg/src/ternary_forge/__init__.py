"""Counting constrained ternary integers and auditing their cyclotomic coefficients."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError, CoefficientOverflowError, DomainError, InterpretationError,
    InvariantViolation, PrecisionError, TernaryForgeError, TheoremViolation, UnsupportedError,
)
from .primes import (  # noqa: E402
    count_primes, divisors, euler_phi, factorize, is_prime, mobius, primes_in_ap, sieve_primes,
)
from .ternary import (  # noqa: E402
    CoefficientOptimal, CountReport, CryptoGap, PairSetModP, ResidueModPQ, TernaryTriple,
    Unconstrained, count_exact, count_omega_exact, count_squarefree_omega, count_ternary,
    enumerate_ternary, main_term, ternary_identity_check,
)
from .cyclotomic import (  # noqa: E402
    IntegerPolynomial, coefficient_range_check, cyclotomic_coeffs, height,
    inverse_cyclotomic_coeffs, is_coefficient_optimal_criterion, is_coefficient_optimal_direct,
    is_flat, neighbor_diff_check, product_identity_holds,
)
from .beiter import (  # noqa: E402
    bb_set, bb_value, beiter_pair_set, bound_params, check_bounds_on_triple,
    corrected_beiter_holds, gb_set, gb_value, n_bb_closed, n_gb_closed,
)
from .constants import (  # noqa: E402
    CertifiedValue, compute_c1, compute_c2, prime_reciprocal_sum_zeta, zeta,
)
