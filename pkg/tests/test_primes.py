import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import trial_division_primes
from ternary_forge.errors import CapacityError, DomainError
from ternary_forge.primes import (
    count_primes, divisors, euler_phi, euler_phi_table, factorize, is_prime,
    iter_prime_segments, mobius, mobius_table, prime_array, primes_in_ap, sieve_primes,
)


def test_sieve_matches_trial_division():
    assert sieve_primes(5000).tolist() == trial_division_primes(5000)


@pytest.mark.parametrize("limit,expected", [(2, 1), (10, 4), (100, 25), (10**4, 1229), (10**6, 78498)])
def test_prime_counts(limit, expected):
    assert count_primes(limit) == expected
    assert sieve_primes(limit).pi(limit) == expected


def test_segments_stitch_without_gaps():
    small = np.concatenate(list(iter_prime_segments(200_000, segment=1000)))
    assert small.tolist() == sieve_primes(200_000).tolist()


def test_segment_start():
    got = np.concatenate(list(iter_prime_segments(1000, start=500)))
    assert got.tolist() == [p for p in trial_division_primes(1000) if p >= 500]


def test_sieve_errors():
    with pytest.raises(DomainError):
        sieve_primes(1)
    with pytest.raises(CapacityError):
        sieve_primes(10**13)
    with pytest.raises(CapacityError):
        sieve_primes(2 * 10**8)


def test_prime_table_pi_beyond_limit():
    table = sieve_primes(100)
    assert 97 in table and 91 not in table
    with pytest.raises(DomainError):
        table.pi(101)


def test_prime_array_is_prefix_of_shared_table():
    a = prime_array(1000)
    b = prime_array(50)
    assert b.tolist() == a[: b.size].tolist() == trial_division_primes(50)


@given(st.integers(min_value=-10, max_value=10**6))
def test_is_prime_small(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(min_value=2, max_value=2**64))
@settings(max_examples=300)
def test_is_prime_64bit(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n", [3215031751, 2152302898747, 3474749660383, 341550071728321,
                               3825123056546413051, 318665857834031151167461])
def test_strong_pseudoprimes_rejected(n):
    assert not is_prime(n)


@given(st.integers(min_value=1, max_value=10**15))
@settings(max_examples=200)
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(is_prime(p) for p in f)
    assert f == sympy.factorint(n)


def test_factorize_semiprime_of_large_primes():
    p, q = 1_000_000_007, 998_244_353
    assert factorize(p * q) == {q: 1, p: 1}


@given(st.integers(min_value=1, max_value=10**9))
@settings(max_examples=200)
def test_multiplicative_functions(n):
    assert mobius(n) == sympy.mobius(n)
    assert euler_phi(n) == sympy.totient(n)


def test_tables_match_pointwise():
    mu, phi = mobius_table(3000), euler_phi_table(3000)
    assert all(mu[n] == mobius(n) and phi[n] == euler_phi(n) for n in range(1, 3001))


def test_divisors():
    assert divisors(105) == [1, 3, 5, 7, 15, 21, 35, 105]
    assert divisors(1) == [1]


def test_primes_in_ap():
    assert primes_in_ap(100, 15, 1) == [31, 61]
    assert primes_in_ap(100, 4, 3) == [p for p in trial_division_primes(100) if p % 4 == 3]
    with pytest.raises(DomainError):
        primes_in_ap(100, 15, 15)
