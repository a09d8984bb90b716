import math

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_predicates, factor_all, ternary_by_factoring
from ternary_forge.beiter import beiter_pair_set, bound_params
from ternary_forge.errors import DomainError, UnsupportedError
from ternary_forge.ternary import (
    CoefficientOptimal, CryptoGap, PairSetModP, ResidueModPQ, TernaryTriple, Unconstrained,
    count_exact, count_omega_exact, count_squarefree_omega, count_ternary, describe,
    enumerate_ternary, main_term, ternary_identity_check,
)

X = 20_000
FACTORS = factor_all(X)
TERNARY = ternary_by_factoring(X, FACTORS)


def _bb_brute(p, q, r):
    bp = bound_params(p, q, r)
    return 3 * min(2 * bp.a + bp.d1, p - bp.d1) <= 2 * p


CASES = [("ternary", Unconstrained(), lambda p, q, r: True),
         ("coefficient-optimal", CoefficientOptimal(), brute_predicates()["coefficient-optimal"]),
         ("mod-pq a=1", ResidueModPQ(1), brute_predicates(1)["mod-pq"]),
         ("mod-pq a=-1", ResidueModPQ(-1), brute_predicates(-1)["mod-pq"]),
         ("mod-pq a=4", ResidueModPQ(4), brute_predicates(4)["mod-pq"]),
         ("crypto-gap", CryptoGap(), brute_predicates()["crypto-gap"]),
         ("pair-set-bb", beiter_pair_set(), _bb_brute)]


@pytest.mark.parametrize("name,c,pred", CASES, ids=[c[0] for c in CASES])
@pytest.mark.parametrize("x", [104, 105, 1000, 4321, X])
def test_counts_match_factoring(name, c, pred, x):
    expected = sorted(t for t in TERNARY if t[0] * t[1] * t[2] <= x and pred(*t))
    listed = [t[:3] for t in enumerate_ternary(x, c)]
    assert listed == expected
    assert count_exact(x, c) == len(expected)


def test_smallest_members():
    assert next(enumerate_ternary(10**4)).n == 105
    assert next(enumerate_ternary(10**4, CoefficientOptimal())).n == 561
    assert count_exact(560, CoefficientOptimal()) == 0
    assert count_exact(561, CoefficientOptimal()) == 1


def test_thread_count_does_not_change_counts():
    for c in (Unconstrained(), CoefficientOptimal(), ResidueModPQ(1), beiter_pair_set()):
        assert {count_exact(10**6, c, threads=t) for t in (1, 2, 3)} == {count_exact(10**6, c)}


def test_triple_validation():
    assert TernaryTriple.of(3, 5, 7).n == 105
    for bad in [(2, 3, 5), (3, 3, 5), (5, 3, 7), (3, 5, 9)]:
        with pytest.raises(DomainError):
            TernaryTriple.of(*bad)


def test_residue_zero_rejected():
    with pytest.raises(DomainError):
        ResidueModPQ(0)


def test_pair_set_without_table_fn_matches_table_fn():
    plain = PairSetModP(member=beiter_pair_set().member, alpha_hint=beiter_pair_set().alpha_hint)
    assert count_exact(50_000, plain) == count_exact(50_000, beiter_pair_set())


def test_main_terms():
    x = 10.0**6
    lx, llx = math.log(x), math.log(math.log(x))
    assert main_term(x, Unconstrained()) == pytest.approx(x * llx**2 / (2 * lx) * (1 - 1 / llx))
    assert main_term(x, CoefficientOptimal()) == pytest.approx(0.249029016616718 * x / lx**2)
    assert main_term(x, ResidueModPQ(1)) == pytest.approx(0.597771234896174 * x / lx)
    assert main_term(x, beiter_pair_set()) == pytest.approx(25 / 27 * x * llx**2 / (2 * lx))
    assert main_term(x, CryptoGap()) is None


def test_count_report_fields():
    rep = count_ternary(10**4, CryptoGap())
    assert rep.predicted is None and not rep.ratio_defined
    rep = count_ternary(10**4)
    assert rep.count == 820 and rep.ratio == pytest.approx(rep.count / rep.predicted)


def test_describe():
    assert describe(Unconstrained()) == "ternary"
    assert describe(ResidueModPQ(-1)) == "mod-pq(a=-1)"


@pytest.mark.parametrize("x", [2, 30, 1000, X])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_omega_counts_match_factoring(x, k):
    fs = [f for n, f in FACTORS.items() if n <= x]
    n_k = sum(len(f) == k for f in fs)
    m_k = sum(len(f) == k and len(set(f)) == k for f in fs)
    for method in ("sieve", "formula"):
        assert count_omega_exact(x, k, method) == n_k
        assert count_squarefree_omega(x, k, method) == m_k


def test_omega_k_out_of_range():
    with pytest.raises(UnsupportedError):
        count_omega_exact(100, 4)


@given(st.integers(min_value=105, max_value=3 * 10**5))
@settings(max_examples=25, deadline=None)
def test_identity_offset_is_constant(x):
    chk = ternary_identity_check(x)
    assert chk.holds and chk.discrepancy == -1


def test_identity_formula_branch():
    # above the sieve threshold the prime-counting formula is used
    chk = ternary_identity_check(3 * 10**7)
    assert chk.holds
