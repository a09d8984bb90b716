"""numba kernels behind the polynomial and counting code paths."""
from __future__ import annotations

import numpy as np
from numba import njit

_BUDGET = 1 << 62


@njit(cache=True, nogil=True)
def series_product(mults, divs, length):
    """Coefficients of prod(1 - x^e, e in mults) / prod(1 - x^e, e in divs) mod x^length.

    ``mults`` ascending, ``divs`` descending. Returns (coeffs, ok); ok is False
    when a prefix sum could have left the int64 budget.
    """
    c = np.zeros(length, dtype=np.int64)
    c[0] = 1
    big = 1  # bound on max |c|
    for e in mults:
        if e >= length:
            continue
        if big > _BUDGET // 2:
            return c, False
        for k in range(length - 1, e - 1, -1):
            c[k] -= c[k - e]
        big *= 2
    for e in divs:
        if e >= length:
            continue
        rows = (length + e - 1) // e
        if big > _BUDGET // rows:
            return c, False
        big = 0
        for k in range(length):
            if k >= e:
                c[k] += c[k - e]
            v = abs(c[k])
            if v > big:
                big = v
    return c, True


# Ternary counting kernels. Each handles one p (index ``i`` into ``primes``)
# and the q indices [j_lo, j_hi); callers split work across these ranges.
# ``primes`` must cover every prime up to x // (p*q) for the pairs handled.


@njit(cache=True, nogil=True)
def _upper(primes, y):
    return np.searchsorted(primes, y, side="right")


@njit(cache=True, nogil=True)
def count_unconstrained(primes, x, i, j_lo, j_hi):
    p = primes[i]
    total = 0
    for j in range(j_lo, j_hi):
        q = primes[j]
        if p * q * q >= x:
            break
        k = _upper(primes, x // (p * q))
        if k > j + 1:
            total += k - j - 1
    return total


@njit(cache=True, nogil=True)
def count_coefficient_optimal(primes, x, i, j_lo, j_hi):
    p = primes[i]
    total = 0
    for j in range(j_lo, j_hi):
        q = primes[j]
        if p * q * q >= x:
            break
        b = q % p
        if b != 1 and b != p - 1:
            continue
        # r (p - 2) < (p - 1)(q - 1)
        hi = min(x // (p * q), ((p - 1) * (q - 1) - 1) // (p - 2))
        k_hi = _upper(primes, hi)
        for k in range(j + 1, k_hi):
            if primes[k] % p == b:
                total += 1
    return total


@njit(cache=True, nogil=True)
def count_residue_mod_pq(primes, x, i, j_lo, j_hi, a):
    p = primes[i]
    total = 0
    for j in range(j_lo, j_hi):
        q = primes[j]
        if p * q * q >= x:
            break
        m = p * q
        hi = x // m
        r = a % m
        if r <= q:
            r += m * ((q - r) // m + 1)
        while r <= hi:
            k = np.searchsorted(primes, r)
            if k < primes.size and primes[k] == r:
                total += 1
            r += m
    return total


@njit(cache=True, nogil=True)
def count_pair_table(primes, x, i, j_lo, j_hi, table):
    """``table`` is the flattened p x p membership matrix indexed [q % p, r % p]."""
    p = primes[i]
    total = 0
    for j in range(j_lo, j_hi):
        q = primes[j]
        if p * q * q >= x:
            break
        row = (q % p) * p
        k_hi = _upper(primes, x // (p * q))
        for k in range(j + 1, k_hi):
            if table[row + primes[k] % p]:
                total += 1
    return total


@njit(cache=True, nogil=True)
def count_crypto_gap(primes, x, i, j_lo, j_hi):
    p = primes[i]
    total = 0
    for j in range(j_lo, j_hi):
        q = primes[j]
        if p * q * q >= x or q >= 4 * (p - 1):
            break
        k = _upper(primes, min(x // (p * q), p * p - 1))
        if k > j + 1:
            total += k - j - 1
    return total
