"""Coefficient bounds for ternary cyclotomic polynomials built from inverse residues mod p.

Two bounds are implemented: Bachman's ``min((p-1)/2 + a, ...)`` family and
Bzdega's ``min(2a + d, p - d)`` family, together with their per-residue-pair
forms GB(j, k), BB(j, k) and the sets of pairs where they certify the
corrected Beiter bound |a_pqr(k)| <= 2p/3.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclotomic import IntegerPolynomial, _as_triple, cyclotomic_coeffs, height
from .errors import DomainError, InterpretationError, InvariantViolation, TheoremViolation
from .primes import is_prime
from .ternary import PairSetModP, TernaryTriple

BB_DENSITY = Fraction(25, 27)
GB_DENSITY = Fraction(8, 9)


def mod_inverse(a: int, p: int) -> int:
    if a % p == 0:
        raise DomainError(f"{a} has no inverse modulo {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class BoundParams:
    p: int
    q_star: int
    r_star: int
    a: int
    d: int
    d1: int


def bound_params(p: int, q: int, r: int) -> BoundParams:
    """Inverse-residue data (q*, r*, a, d, d1); d is computed two ways and cross-checked."""
    qs, rs = mod_inverse(q, p), mod_inverse(r, p)
    a = min(qs, rs, p - qs, p - rs)
    d = mod_inverse(a * q * r, p)  # a d q r = 1 (mod p)
    d_closed = min(max(qs, rs), max(p - qs, p - rs))
    if d != d_closed:
        raise InvariantViolation(f"d mismatch for ({p}, {q}, {r}): congruence {d}, closed form {d_closed}")
    d1 = min(d, p - d)
    if not (1 <= a <= (p - 1) // 2 and 1 <= d1 <= (p - 1) // 2):
        raise InvariantViolation(f"parameters out of range for ({p}, {q}, {r}): a={a}, d1={d1}")
    return BoundParams(p, qs, rs, a, d, d1)


def _check_pair(p: int, j: int, k: int) -> None:
    if not (1 <= j <= p - 1 and 1 <= k <= p - 1):
        raise DomainError(f"pair ({j}, {k}) outside [1, {p - 1}]^2")


def _alpha_delta(p, j, k):
    alpha = np.minimum(np.minimum(j, k), np.minimum(p - j, p - k))
    delta = np.minimum(np.maximum(j, k), np.maximum(p - j, p - k))
    return alpha, np.minimum(delta, p - delta)


def gb_value(p: int, j: int, k: int) -> int:
    _check_pair(p, j, k)
    alpha, delta1 = _alpha_delta(p, j, k)
    return int(min((p - 1) // 2 + alpha, p - delta1))


def bb_value(p: int, j: int, k: int) -> int:
    _check_pair(p, j, k)
    alpha, delta1 = _alpha_delta(p, j, k)
    return int(min(2 * alpha + delta1, p - delta1))


@dataclass(frozen=True)
class PairBoundTable:
    """GB and BB over all pairs; ``gb[j-1, k-1]`` holds GB(j, k)."""

    p: int
    gb: np.ndarray
    bb: np.ndarray


@lru_cache(maxsize=256)
def pair_bound_table(p: int) -> PairBoundTable:
    if p < 3 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    j = np.arange(1, p, dtype=np.int64)[:, None]
    k = np.arange(1, p, dtype=np.int64)[None, :]
    alpha, delta1 = _alpha_delta(p, j, k)
    gb = np.minimum((p - 1) // 2 + alpha, p - delta1)
    bb = np.minimum(2 * alpha + delta1, p - delta1)
    gb.setflags(write=False)
    bb.setflags(write=False)
    return PairBoundTable(p, gb, bb)


def _certified_mask(values: np.ndarray, p: int) -> np.ndarray:
    return 3 * values <= 2 * p


def gb_set(p: int) -> frozenset[tuple[int, int]]:
    """Pairs (j, k) with GB(j, k) <= 2p/3. For p = 3 this is every pair."""
    jj, kk = np.nonzero(_certified_mask(pair_bound_table(p).gb, p))
    return frozenset(zip((jj + 1).tolist(), (kk + 1).tolist()))


def bb_set(p: int) -> frozenset[tuple[int, int]]:
    """Pairs (j, k) with BB(j, k) <= 2p/3. For p = 3 this is every pair."""
    jj, kk = np.nonzero(_certified_mask(pair_bound_table(p).bb, p))
    return frozenset(zip((jj + 1).tolist(), (kk + 1).tolist()))


def legendre_mod3(p: int) -> int:
    """(p/3): +1 if p = 1 (mod 3), -1 if p = 2 (mod 3), 0 if 3 | p."""
    return (0, 1, -1)[p % 3]


def _integral(value: Fraction, what: str, p: int) -> int:
    if value.denominator != 1 or value < 0:
        raise InterpretationError(f"{what}({p}) evaluated to {value}, not a nonnegative integer")
    return int(value)


def _closed_form_prime(p: int) -> None:
    if p < 5 or not is_prime(p):
        raise DomainError(f"closed forms need a prime p >= 5, got {p}")


def n_gb_closed(p: int) -> int:
    _closed_form_prime(p)
    if p % 3 == 1:
        v = Fraction(8, 9) * p * p - Fraction(16, 9) * p + Fraction(8, 9)
    else:
        v = Fraction(8, 9) * p * p - Fraction(8, 9) * p - Fraction(16, 9)
    return _integral(v, "N_GB", p)


def n_bb_closed(p: int) -> int:
    _closed_form_prime(p)
    const = Fraction(73, 27) if p % 9 in (2, 7) else Fraction(37, 27)
    v = BB_DENSITY * p * p - (Fraction(8, 27) * legendre_mod3(p) + 2) * p + const
    return _integral(v, "N_BB", p)


@lru_cache(maxsize=1024)
def _bb_residue_table(p: int) -> np.ndarray:
    """[q mod p, r mod p] -> whether (q*, r*) lies in BB(p); residue 0 never does."""
    mask = _certified_mask(pair_bound_table(p).bb, p)
    inv = np.zeros(p, dtype=np.int64)
    for b in range(1, p):
        inv[b] = pow(b, -1, p)
    table = np.zeros((p, p), dtype=bool)
    table[1:, 1:] = mask[(inv[1:] - 1)[:, None], (inv[1:] - 1)[None, :]]
    table.setflags(write=False)
    return table


def _bb_member(p: int, b: int, c: int) -> bool:
    b, c = b % p, c % p
    if b == 0 or c == 0:
        return False
    return (mod_inverse(b, p), mod_inverse(c, p)) in bb_set(p)


def beiter_pair_set() -> PairSetModP:
    """Residue pairs (q mod p, r mod p) whose inverses lie in BB(p)."""
    return PairSetModP(member=_bb_member, alpha_hint=BB_DENSITY, name="pair-set-bb",
                       table_fn=_bb_residue_table)


@dataclass(frozen=True)
class BoundReport:
    triple: TernaryTriple
    params: BoundParams
    min_coeff: int
    max_coeff: int
    height: int
    bachman: tuple[int, int]
    bzdega: tuple[int, int]
    bachman_abs: int
    bzdega_abs: int


def check_bounds_on_triple(t, poly: IntegerPolynomial | None = None) -> BoundReport:
    """Compute Phi_pqr and assert both two-sided bounds and their absolute forms.

    Raises TheoremViolation on any failure: the bounds are theorems, so a
    failure means the coefficients were computed wrongly.
    """
    t = _as_triple(t)
    p, q, r, n = t
    c = (poly if poly is not None else cyclotomic_coeffs(n)).coeffs
    lo, hi = int(c.min()), int(c.max())
    bp = bound_params(p, q, r)
    a, d, d1 = bp.a, bp.d, bp.d1
    half = (p - 1) // 2
    bachman = (-min(half + a, d), min(half + a, p - d))
    bzdega = (-min(p + 2 * a - d, d), min(2 * a + d, p - d))
    bachman_abs = min(half + a, p - d1)
    bzdega_abs = min(2 * a + d1, p - d1)
    h = max(-lo, hi)
    failures = []
    for name, (blo, bhi) in (("Bachman", bachman), ("Bzdega", bzdega)):
        if lo < blo or hi > bhi:
            failures.append(f"{name} [{blo}, {bhi}] vs observed [{lo}, {hi}]")
    for name, bound in (("Bachman |.|", bachman_abs), ("Bzdega |.|", bzdega_abs)):
        if h > bound:
            failures.append(f"{name} {bound} vs height {h}")
    if failures:
        raise TheoremViolation(f"n = {n} = {p}*{q}*{r}: " + "; ".join(failures))
    return BoundReport(t, bp, lo, hi, h, bachman, bzdega, bachman_abs, bzdega_abs)


def corrected_beiter_holds(t, poly: IntegerPolynomial | None = None) -> bool:
    """3 h(Phi_n) <= 2p, in integers."""
    t = _as_triple(t)
    h = height(poly if poly is not None else cyclotomic_coeffs(t.n))
    return 3 * h <= 2 * t.p
