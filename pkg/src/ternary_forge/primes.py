"""Prime generation, primality, residue-class filtering and the functions mu, phi.

The sieve is an odd-only segmented sieve of Eratosthenes over numpy byte
flags. Tables up to ``STREAM_THRESHOLD`` are materialised on request; above
that, callers stream segments with :func:`iter_prime_segments` (or pass
``store=True`` explicitly and pay the O(pi(limit)) memory).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import CapacityError, DomainError

#: Largest limit accepted by the sieve (base primes up to 10**6 are kept in memory).
SIEVE_CAP = 10**12
#: Above this limit :func:`sieve_primes` requires ``store=True``.
STREAM_THRESHOLD = 10**8
#: Odd flags per segment (2**20 bytes, roughly an L2 cache).
SEGMENT_FLAGS = 1 << 20

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _odd_sieve(limit: int) -> np.ndarray:
    """Plain (unsegmented) odd-only sieve; used for base primes."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones((limit - 1) // 2, dtype=np.bool_)  # flags[i] <-> 2i + 3
    for i in range(int((math.isqrt(limit) - 3) // 2) + 1):
        if flags[i]:
            p = 2 * i + 3
            flags[(p * p - 3) // 2 :: p] = False
    odd = 2 * np.flatnonzero(flags).astype(np.int64) + 3
    return np.concatenate((np.array([2], dtype=np.int64), odd))


def iter_prime_segments(limit: int, start: int = 2, segment: int = SEGMENT_FLAGS) -> Iterator[np.ndarray]:
    """Yield ascending int64 arrays whose concatenation is every prime in [start, limit].

    Memory use is O(segment) plus the base primes up to sqrt(limit).
    """
    if limit > SIEVE_CAP:
        raise CapacityError(f"limit {limit} exceeds sieve cap {SIEVE_CAP}")
    if limit < 2 or start > limit:
        return
    if start <= 2:
        yield np.array([2], dtype=np.int64)
        start = 3
    base = _odd_sieve(math.isqrt(limit))[1:]
    low = start | 1
    span = 2 * segment
    while low <= limit:
        high = min(low + span, limit + 1)  # exclusive
        nflags = (high - low + 1) // 2
        flags = np.ones(nflags, dtype=np.bool_)
        for p in base:
            p = int(p)
            pp = p * p
            if pp >= high:
                break
            first = max(pp, -(-low // p) * p)
            if not first & 1:
                first += p
            if first < high:
                flags[(first - low) // 2 :: p] = False
        if low == 1:
            flags[0] = False
        seg = low + 2 * np.flatnonzero(flags).astype(np.int64)
        if seg.size:
            yield seg
        low += span


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit`` in increasing order (read-only int64 array)."""

    limit: int
    primes: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return int(self.primes.size)

    def __iter__(self):
        return iter(self.primes.tolist())

    def __getitem__(self, i):
        return self.primes[i]

    def __contains__(self, n) -> bool:
        i = int(np.searchsorted(self.primes, n))
        return i < self.primes.size and int(self.primes[i]) == n

    def pi(self, y) -> int:
        """Number of primes <= y (y must not exceed ``limit``)."""
        if y > self.limit:
            raise DomainError(f"pi({y}) requested from a table sieved to {self.limit}")
        return int(np.searchsorted(self.primes, y, side="right"))

    def tolist(self) -> list[int]:
        return self.primes.tolist()


def sieve_primes(limit: int, store: bool | None = None) -> PrimeTable:
    if limit < 2:
        raise DomainError(f"sieve_primes needs limit >= 2, got {limit}")
    if limit > SIEVE_CAP:
        raise CapacityError(f"limit {limit} exceeds sieve cap {SIEVE_CAP}")
    if limit > STREAM_THRESHOLD and not store:
        raise CapacityError(
            f"limit {limit} is above {STREAM_THRESHOLD}; stream with iter_prime_segments "
            "or pass store=True"
        )
    parts = list(iter_prime_segments(limit))
    return PrimeTable(limit, np.concatenate(parts))


def count_primes(limit: int) -> int:
    """pi(limit) by streaming the segmented sieve."""
    if limit < 2:
        return 0
    return sum(int(seg.size) for seg in iter_prime_segments(limit))


_shared = {"limit": 1, "primes": np.empty(0, dtype=np.int64)}


def prime_array(limit: int) -> np.ndarray:
    """Primes <= limit as a read-only array, served from a shared growing table."""
    limit = int(limit)
    if limit > _shared["limit"]:
        target = min(max(limit, 2 * _shared["limit"], 1 << 16), max(limit, SIEVE_CAP))
        arr = sieve_primes(target, store=True).primes
        _shared.update(limit=target, primes=arr)
    arr = _shared["primes"]
    return arr[: int(np.searchsorted(arr, limit, side="right"))]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the witness set is exact for n < 3.3 * 10**24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_ap(limit: int, modulus: int, residue: int) -> list[int]:
    if modulus < 1:
        raise DomainError(f"modulus must be >= 1, got {modulus}")
    if not 0 <= residue < modulus:
        raise DomainError(f"residue {residue} not in [0, {modulus})")
    if limit < 2:
        return []
    ps = sieve_primes(limit, store=True).primes
    return ps[ps % modulus == residue].tolist()


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation {p: e}; trial division then Pollard-Brent."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 10_000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += steps[i]
        i = (i + 1) % 8
    if n == 1:
        return dict(sorted(out.items()))
    if f * f > n:
        out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))
    rng = random.Random(n)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m, rng)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def mobius(n: int) -> int:
    if n < 1:
        raise DomainError(f"mobius undefined for {n}")
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    if n < 1:
        raise DomainError(f"euler_phi undefined for {n}")
    out = n
    for p in factorize(n):
        out -= out // p
    return out


def mobius_table(limit: int) -> np.ndarray:
    """mu(0..limit) as int8; entry 0 is 0."""
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    if limit < 2:
        return mu
    for p in prime_array(limit).tolist():
        mu[p::p] *= -1
        if p * p <= limit:
            mu[p * p :: p * p] = 0
    return mu


def euler_phi_table(limit: int) -> np.ndarray:
    """phi(0..limit) as int64; entry 0 is 0."""
    phi = np.arange(limit + 1, dtype=np.int64)
    if limit < 2:
        return phi
    for p in prime_array(limit).tolist():
        phi[p::p] -= phi[p::p] // p
    return phi


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)
