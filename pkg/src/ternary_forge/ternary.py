"""Enumeration and exact counting of ternary integers n = pqr under constraints.

Enumeration is lexicographic in (p, q, r) with the range cuts p^3 < x and
p q^2 < x. Counting runs the same loops as numba kernels, split over
(p, block of q) tasks, so the merged total is independent of thread count.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, ClassVar, Iterator, NamedTuple, Union

import numpy as np

from . import _kernels
from .constants import c1, c2
from .errors import DomainError, UnsupportedError
from .primes import is_prime, prime_array

SMALLEST_TERNARY = 105
#: Above this cutoff counts of Omega(n) = k switch from a sieve to prime-counting sums.
OMEGA_SIEVE_MAX = 2 * 10**7
#: q indices per counting task.
Q_BLOCK = 512


class TernaryTriple(NamedTuple):
    """n = p*q*r with 3 <= p < q < r all prime."""

    p: int
    q: int
    r: int
    n: int

    @classmethod
    def of(cls, p: int, q: int, r: int) -> "TernaryTriple":
        p, q, r = int(p), int(q), int(r)
        if not 3 <= p < q < r:
            raise DomainError(f"need 3 <= p < q < r, got ({p}, {q}, {r})")
        for v in (p, q, r):
            if not is_prime(v):
                raise DomainError(f"{v} is not prime")
        return cls(p, q, r, p * q * r)


# -- constraint families ----------------------------------------------------


@dataclass(frozen=True)
class Unconstrained:
    kind: ClassVar[str] = "ternary"

    def admits(self, p: int, q: int, r: int) -> bool:
        return True

    def mask(self, p: int, q: int, rs: np.ndarray) -> np.ndarray:
        return np.ones(rs.shape, dtype=bool)


@dataclass(frozen=True)
class CoefficientOptimal:
    """q = r = +-1 (mod p) and r < (p-1)(q-1)/(p-2), the last test done as r(p-2) < (p-1)(q-1)."""

    kind: ClassVar[str] = "coefficient-optimal"

    def admits(self, p: int, q: int, r: int) -> bool:
        b = q % p
        return b in (1, p - 1) and r % p == b and r * (p - 2) < (p - 1) * (q - 1)

    def mask(self, p: int, q: int, rs: np.ndarray) -> np.ndarray:
        b = q % p
        if b not in (1, p - 1):
            return np.zeros(rs.shape, dtype=bool)
        return (rs % p == b) & (rs * (p - 2) < (p - 1) * (q - 1))


@dataclass(frozen=True)
class ResidueModPQ:
    """r = a (mod pq); a = -1 means the class pq - 1."""

    a: int
    kind: ClassVar[str] = "mod-pq"

    def __post_init__(self):
        if self.a == 0:
            raise DomainError("ResidueModPQ needs a non-zero residue")

    def admits(self, p: int, q: int, r: int) -> bool:
        return r % (p * q) == self.a % (p * q)

    def mask(self, p: int, q: int, rs: np.ndarray) -> np.ndarray:
        return rs % (p * q) == self.a % (p * q)


@dataclass(frozen=True)
class PairSetModP:
    """(q mod p, r mod p) must lie in a per-p set of residue pairs.

    ``member(p, q mod p, r mod p)`` decides membership; ``alpha_hint`` is the
    limiting density |M(p)| / p^2 used for the predicted main term.
    ``table_fn(p)``, when given, returns the whole p x p boolean membership
    matrix at once and must agree with ``member``.
    """

    member: Callable[[int, int, int], bool]
    alpha_hint: Fraction
    name: str = "pair-set"
    table_fn: Callable[[int], np.ndarray] | None = field(default=None, compare=False)
    kind: ClassVar[str] = "pair-set"

    def admits(self, p: int, q: int, r: int) -> bool:
        return bool(self.member(p, q % p, r % p))

    def table(self, p: int) -> np.ndarray:
        if self.table_fn is not None:
            return np.asarray(self.table_fn(p), dtype=bool)
        t = np.zeros((p, p), dtype=bool)
        for b in range(p):
            for c in range(p):
                t[b, c] = bool(self.member(p, b, c))
        return t

    def mask(self, p: int, q: int, rs: np.ndarray) -> np.ndarray:
        return self.table(p)[q % p][rs % p]


@dataclass(frozen=True)
class CryptoGap:
    """4(p - 1) > q and p^2 > r."""

    kind: ClassVar[str] = "crypto-gap"

    def admits(self, p: int, q: int, r: int) -> bool:
        return 4 * (p - 1) > q and p * p > r

    def mask(self, p: int, q: int, rs: np.ndarray) -> np.ndarray:
        if 4 * (p - 1) <= q:
            return np.zeros(rs.shape, dtype=bool)
        return rs < p * p


ConstraintSpec = Union[Unconstrained, CoefficientOptimal, ResidueModPQ, PairSetModP, CryptoGap]


def describe(c: ConstraintSpec) -> str:
    if isinstance(c, ResidueModPQ):
        return f"mod-pq(a={c.a})"
    if isinstance(c, PairSetModP):
        return f"{c.name}(alpha={c.alpha_hint})"
    return c.kind


# -- enumeration ------------------------------------------------------------


def _prime_pool(x: int) -> np.ndarray:
    return prime_array(max(x // 15, 2))


def enumerate_ternary(x: int, c: ConstraintSpec | None = None) -> Iterator[TernaryTriple]:
    """Yield every admissible pqr <= x once, in lexicographic (p, q, r) order."""
    c = c if c is not None else Unconstrained()
    x = int(x)
    if x < SMALLEST_TERNARY:
        return
    primes = _prime_pool(x)
    plist = primes.tolist()
    for i in range(1, len(plist)):
        p = plist[i]
        if p * p * p >= x:
            break
        table = c.table(p) if isinstance(c, PairSetModP) else None
        for j in range(i + 1, len(plist)):
            q = plist[j]
            if p * q * q >= x:
                break
            hi = int(np.searchsorted(primes, x // (p * q), side="right"))
            rs = primes[j + 1 : hi]
            keep = table[q % p][rs % p] if table is not None else c.mask(p, q, rs)
            for r in rs[keep].tolist():
                yield TernaryTriple(p, q, r, p * q * r)


# -- counting ---------------------------------------------------------------


def main_term(x: float, c: ConstraintSpec) -> float | None:
    """Leading asymptotic for the count of admissible pqr <= x, or None if unknown."""
    lx = math.log(x)
    llx = math.log(lx)
    if isinstance(c, Unconstrained):
        return x * llx**2 / (2 * lx) * (1 - 1 / llx)
    if isinstance(c, CoefficientOptimal):
        return c1() * x / lx**2
    if isinstance(c, ResidueModPQ):
        return c2() * x / lx
    if isinstance(c, PairSetModP):
        return float(c.alpha_hint) * x * llx**2 / (2 * lx)
    return None


@dataclass(frozen=True)
class CountReport:
    x: int
    count: int
    predicted: float | None
    ratio: float | None
    constraint: ConstraintSpec
    elapsed: float = field(compare=False)

    @property
    def ratio_defined(self) -> bool:
        return self.ratio is not None


def _tasks(primes: np.ndarray, x: int):
    """(i, j_lo, j_hi) work items covering every (p, q) pair with p q^2 < x."""
    out = []
    for i in range(1, primes.size):
        p = int(primes[i])
        if p * p * p >= x:
            break
        j_end = int(np.searchsorted(primes, math.isqrt(x // p) + 1, side="right"))
        for lo in range(i + 1, j_end, Q_BLOCK):
            out.append((i, lo, min(lo + Q_BLOCK, j_end)))
    return out


def _kernel_for(c: ConstraintSpec, primes: np.ndarray, x: int):
    if isinstance(c, Unconstrained):
        return lambda i, lo, hi: _kernels.count_unconstrained(primes, x, i, lo, hi)
    if isinstance(c, CoefficientOptimal):
        return lambda i, lo, hi: _kernels.count_coefficient_optimal(primes, x, i, lo, hi)
    if isinstance(c, ResidueModPQ):
        return lambda i, lo, hi: _kernels.count_residue_mod_pq(primes, x, i, lo, hi, c.a)
    if isinstance(c, CryptoGap):
        return lambda i, lo, hi: _kernels.count_crypto_gap(primes, x, i, lo, hi)
    if isinstance(c, PairSetModP):
        tables: dict[int, np.ndarray] = {}

        def run(i, lo, hi):
            p = int(primes[i])
            if p not in tables:
                tables[p] = np.ascontiguousarray(c.table(p).reshape(-1))
            return _kernels.count_pair_table(primes, x, i, lo, hi, tables[p])

        return run
    return None


def count_exact(x: int, c: ConstraintSpec | None = None, threads: int = 1) -> int:
    c = c if c is not None else Unconstrained()
    x = int(x)
    if x < SMALLEST_TERNARY:
        return 0
    primes = _prime_pool(x)
    kernel = _kernel_for(c, primes, x)
    if kernel is None:
        return sum(1 for _ in enumerate_ternary(x, c))
    tasks = _tasks(primes, x)
    if isinstance(c, PairSetModP):
        # build membership tables up front; the predicate may not be thread safe
        for i in sorted({t[0] for t in tasks}):
            kernel(i, i + 1, i + 1)
    if threads <= 1:
        return int(sum(kernel(*t) for t in tasks))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return int(sum(pool.map(lambda t: kernel(*t), tasks)))


def count_ternary(x: int, c: ConstraintSpec | None = None, threads: int = 1) -> CountReport:
    c = c if c is not None else Unconstrained()
    t0 = time.perf_counter()
    count = count_exact(x, c, threads=threads)
    predicted = main_term(x, c) if x > 15 else None
    ratio = count / predicted if predicted else None
    return CountReport(int(x), count, predicted, ratio, c, time.perf_counter() - t0)


# -- Omega(n) = k counts ----------------------------------------------------


def _check_k(k: int) -> None:
    if k not in (1, 2, 3):
        raise UnsupportedError(f"only k in {{1, 2, 3}} is supported, got {k}")


def _omega_sieve(x: int):
    """(Omega(n), squarefree flag) for 0 <= n <= x."""
    omega = np.zeros(x + 1, dtype=np.int8)
    sqf = np.ones(x + 1, dtype=bool)
    for p in prime_array(x).tolist():
        pk = p
        while pk <= x:
            omega[pk::pk] += 1
            pk *= p
        if p * p <= x:
            sqf[p * p :: p * p] = False
    return omega, sqf


def _omega_formula(x: int, k: int, squarefree: bool) -> int:
    ps = prime_array(x if k == 1 else max(x // 2, 2))

    def pi(y):
        return int(np.searchsorted(ps, y, side="right"))

    if k == 1:
        return pi(x)
    total = 0
    plist = ps.tolist()
    if k == 2:
        for p in plist:
            if p * p > x:
                break
            # q >= p (or q > p when squarefree) with q <= x/p
            total += pi(x // p) - pi(p) + (0 if squarefree else 1)
        return total
    for i, p in enumerate(plist):
        if p * p * p > x:
            break
        for q in plist[i:]:
            if p * q * q > x:
                break
            if squarefree and q == p:
                continue
            n_r = pi(x // (p * q)) - pi(q) + (0 if squarefree else 1)
            total += max(n_r, 0)
    return total


def count_omega_exact(x: int, k: int, method: str = "auto") -> int:
    """N(x, k): number of n <= x with Omega(n) = k."""
    _check_k(k)
    x = int(x)
    if x < 2:
        return 0
    if method == "sieve" or (method == "auto" and x <= OMEGA_SIEVE_MAX):
        omega, _ = _omega_sieve(x)
        return int(np.count_nonzero(omega == k))
    return _omega_formula(x, k, squarefree=False)


def count_squarefree_omega(x: int, k: int, method: str = "auto") -> int:
    """M(x, k): number of squarefree n <= x with Omega(n) = k."""
    _check_k(k)
    x = int(x)
    if x < 2:
        return 0
    if method == "sieve" or (method == "auto" and x <= OMEGA_SIEVE_MAX):
        omega, sqf = _omega_sieve(x)
        return int(np.count_nonzero((omega == k) & sqf))
    return _omega_formula(x, k, squarefree=True)


@dataclass(frozen=True)
class IdentityCheck:
    """N_T(x) against M(x,3) - M(x/2,2) + pi(x/4), with the offset fixed on small cutoffs."""

    x: int
    direct: int
    via_identity: int
    discrepancy: int
    calibration: tuple[tuple[int, int], ...]
    holds: bool

    def __bool__(self):
        return self.holds


CALIBRATION_CUTOFFS = (105, 128, 256, 500, 1000, 2000)


def _identity_side(x: int) -> int:
    return (count_squarefree_omega(x, 3) - count_squarefree_omega(x // 2, 2)
            + count_omega_exact(x // 4, 1))


def ternary_identity_check(x: int, calibration=CALIBRATION_CUTOFFS) -> IdentityCheck:
    """Confirm N_T(x) - (M(x,3) - M(x/2,2) + pi(x/4)) equals the offset seen on small x."""
    if x < SMALLEST_TERNARY:
        raise DomainError(f"identity check needs x >= {SMALLEST_TERNARY}")
    cal = tuple((y, sum(1 for _ in enumerate_ternary(y)) - _identity_side(y)) for y in calibration)
    offsets = {d for _, d in cal}
    direct = count_exact(x)
    via = _identity_side(x)
    disc = direct - via
    holds = len(offsets) == 1 and disc in offsets
    return IdentityCheck(int(x), direct, via, disc, cal, holds)
