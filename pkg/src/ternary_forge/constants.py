"""Density constants of constrained ternary integers, with certified error bounds.

Everything is double precision. Sums go through :func:`math.fsum`, so the only
rounding is per-term; a small per-term allowance is folded into every
reported ``tail_bound`` next to the rigorous truncation bound.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError, PrecisionError
from .primes import euler_phi, mobius, prime_array

#: Smallest tolerance we are willing to certify in double precision.
TOL_FLOOR = 1e-13
#: Default prime cutoff for C1 (tail below 2e-16).
C1_CUTOFF = 200_000
#: Direct terms and Bernoulli corrections used by Euler-Maclaurin.
EM_TERMS = 64
EM_CORRECTIONS = 8  # B_2 .. B_16

_EPS = sys.float_info.epsilon

#: Printed reference digits the computed constants are compared against.
REFERENCE = {
    "C1": 0.249029016616718,
    "C2": 0.597771234896174,
    "prime_sum": 0.77315666904975,
}


@dataclass(frozen=True)
class CertifiedValue:
    value: float
    tail_bound: float
    terms_used: int

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return abs(x - self.value) <= self.tail_bound + slack


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if tol < TOL_FLOOR:
        raise PrecisionError(f"tolerance {tol:g} is below the double-precision floor {TOL_FLOOR:g}")


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m (with B_1 = -1/2)."""
    if m == 0:
        return Fraction(1)
    if m > 1 and m % 2:
        return Fraction(0)
    acc = sum(math.comb(m + 1, k) * bernoulli(k) for k in range(m))
    return -acc / (m + 1)


def c1_tail_bound(cutoff: int) -> float:
    """Upper bound for the C1 terms over primes p > cutoff.

    Each term is below 4/(p-2)^4 since log(1 + t) <= t, and
    sum_{m >= M} m^-4 <= M^-4 + 1/(3 M^3) with M = cutoff - 1.
    """
    m = cutoff - 1
    return 4.0 / m**4 + 4.0 / (3.0 * m**3)


def compute_c1(tol: float = 1e-12, cutoff: int | None = None) -> CertifiedValue:
    """C1 = 4 sum_{p >= 3} log((p-1)/(p-2)) / (p (p-1)^2), truncated at a prime cutoff."""
    _check_tol(tol)
    if cutoff is None:
        cutoff = C1_CUTOFF
        while c1_tail_bound(cutoff) > tol / 2:
            cutoff *= 2
    ps = prime_array(cutoff)[1:].astype(float)
    terms = 4.0 / (ps * (ps - 1.0) ** 2) * np.log1p(1.0 / (ps - 2.0))
    value = math.fsum(terms.tolist())
    bound = c1_tail_bound(cutoff) + 8 * _EPS * value
    return CertifiedValue(value, bound, int(ps.size))


def _zeta_em(s: int, skip_one: bool) -> tuple[float, float]:
    """Euler-Maclaurin for zeta(s) (or zeta(s) - 1); returns (value, remainder bound)."""
    N, J = EM_TERMS, EM_CORRECTIONS
    n = np.arange(2 if skip_one else 1, N, dtype=float)
    parts = (n ** -float(s)).tolist()
    parts.append(N ** (1.0 - s) / (s - 1))
    parts.append(0.5 * N ** -float(s))
    rising = float(s)  # s (s+1) ... (s+2j-2)
    for j in range(1, J + 1):
        if j > 1:
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
        coef = float(bernoulli(2 * j) / math.factorial(2 * j))
        parts.append(coef * rising * N ** (-s - 2.0 * j + 1))
    # for real s the remainder is bounded by the first omitted correction
    rising *= (s + 2 * J - 1) * (s + 2 * J)
    nxt = abs(float(bernoulli(2 * J + 2) / math.factorial(2 * J + 2))) * rising * N ** (-s - 2.0 * J - 1)
    value = math.fsum(parts)
    return value, nxt + 4 * _EPS * abs(value)


def zeta(k: int, tol: float = 1e-13) -> CertifiedValue:
    """zeta(k) for integer k >= 2.

    Even k <= 20 use the Bernoulli closed form; everything else uses
    Euler-Maclaurin with EM_TERMS direct terms.
    """
    if k < 2:
        raise DomainError(f"zeta(k) needs integer k >= 2, got {k}")
    _check_tol(tol)
    if k % 2 == 0 and k <= 20:
        m = k // 2
        b = bernoulli(k)
        value = float((-1) ** (m + 1) * b / (2 * math.factorial(k))) * (2 * math.pi) ** k
        return CertifiedValue(value, 4 * k * _EPS * value, 0)
    value, bound = _zeta_em(k, skip_one=False)
    if bound > tol:
        raise PrecisionError(f"Euler-Maclaurin bound {bound:g} exceeds tolerance {tol:g}")
    return CertifiedValue(value, bound, EM_TERMS + EM_CORRECTIONS)


def zeta_minus_one(k: int) -> CertifiedValue:
    """zeta(k) - 1 without cancellation, for use in log(zeta(k)) at large k."""
    if k < 2:
        raise DomainError(f"zeta(k) needs integer k >= 2, got {k}")
    value, bound = _zeta_em(k, skip_one=True)
    return CertifiedValue(value, bound, EM_TERMS + EM_CORRECTIONS)


def prime_sum_tail_bound(last_k: int) -> float:
    """Bound on sum_{k > last_k} (phi(k) - mu(k))/k * log zeta(k).

    |phi(k) - mu(k)| / k <= 1 and log zeta(k) <= zeta(k) - 1 <= 3 * 2^-k for k >= 2.
    """
    return 3.0 * 2.0 ** -last_k


def prime_reciprocal_sum_zeta(tol: float = 1e-13) -> CertifiedValue:
    """sum_p 1/(p(p-1)) through sum_k (phi(k) - mu(k))/k * log zeta(k)."""
    _check_tol(tol)
    last = 2
    # terms are cheap; run past the tolerance so the value carries full double precision
    while prime_sum_tail_bound(last) > min(tol / 4, 1e-17):
        last += 1
    parts, err = [], 0.0
    for k in range(2, last + 1):  # the k = 1 term is zero
        w = (euler_phi(k) - mobius(k)) / k
        zm1 = zeta_minus_one(k)
        parts.append(w * math.log1p(zm1.value))
        err += abs(w) * (zm1.tail_bound + 2 * _EPS * zm1.value)
    value = math.fsum(parts)
    bound = prime_sum_tail_bound(last) + err + 4 * _EPS * value
    return CertifiedValue(value, bound, last - 1)


def prime_reciprocal_sum_direct(cutoff: int = 10**7) -> CertifiedValue:
    """Plain truncation of sum_p 1/(p(p-1)); the omitted tail lies in [0, 1/cutoff]."""
    ps = prime_array(cutoff).astype(float)
    value = math.fsum((1.0 / (ps * (ps - 1.0))).tolist())
    return CertifiedValue(value, 1.0 / cutoff + 4 * _EPS * value, int(ps.size))


def compute_c2(tol: float = 1e-12) -> CertifiedValue:
    """C2 = (sum_p 1/(p(p-1)))^2 with |s^2 - t^2| <= 2|t| e + e^2 propagated."""
    _check_tol(tol)
    s = prime_reciprocal_sum_zeta(max(tol / 4, TOL_FLOOR))
    e = s.tail_bound
    value = s.value * s.value
    return CertifiedValue(value, 2 * abs(s.value) * e + e * e + 2 * _EPS * value, s.terms_used)


@lru_cache(maxsize=None)
def c1() -> float:
    return compute_c1().value


@lru_cache(maxsize=None)
def c2() -> float:
    return compute_c2().value
