"""Exact coefficients of cyclotomic and inverse cyclotomic polynomials.

Both polynomials are evaluated as truncated power series of the Moebius product

    Phi_n(x) = prod_{d | n} (1 - x^d)^{mu(n/d)}          (n > 1)
    Psi_n(x) = -prod_{d | n, d < n} (1 - x^d)^{-mu(n/d)}  (n > 1)

Multiplying by ``1 - x^e`` is one shifted subtraction and dividing by it is a
strided prefix sum, so a polynomial of length L costs O(L * 2^omega(n)).
All multiplications run first and divisions run by decreasing ``e``; every
intermediate is then the final series times a product of at most
2^(omega(n)-1) binomials ``1 - x^e``, which keeps int64 far from overflow.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._kernels import series_product
from .errors import CoefficientOverflowError, DomainError
from .primes import euler_phi, factorize
from .ternary import TernaryTriple

_INT64_BUDGET = 1 << 62

_observers: list[Callable[[int, "IntegerPolynomial"], None]] = []


def add_observer(fn: Callable[[int, "IntegerPolynomial"], None]) -> None:
    """Register ``fn(n, poly)`` to be called on every computed Phi_n."""
    _observers.append(fn)


def remove_observer(fn) -> None:
    if fn in _observers:
        _observers.remove(fn)


@dataclass(frozen=True, eq=False)
class IntegerPolynomial:
    """Dense integer polynomial; ``coeffs[k]`` is the coefficient of x^k.

    Trailing zeros are stripped on construction, so ``coeffs[-1] != 0`` unless
    the polynomial is zero (stored as an empty array).
    """

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.dtype != np.int64:
            if c.size and np.abs(c).max() >= _INT64_BUDGET:
                raise CoefficientOverflowError("coefficient outside the int64 budget")
            c = c.astype(np.int64)
        k = c.size
        while k and c[k - 1] == 0:
            k -= 1
        c = c[:k]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_list(cls, values) -> "IntegerPolynomial":
        return cls(np.array(values, dtype=np.int64))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return int(self.coeffs.size) - 1

    def __len__(self):
        return int(self.coeffs.size)

    def __getitem__(self, k: int) -> int:
        return int(self.coeffs[k]) if 0 <= k < self.coeffs.size else 0

    def __eq__(self, other):
        if not isinstance(other, IntegerPolynomial):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def tolist(self) -> list[int]:
        return self.coeffs.tolist()

    def __mul__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        a, b = self.coeffs, other.coeffs
        if not a.size or not b.size:
            return IntegerPolynomial(np.zeros(0, dtype=np.int64))
        bound = float(np.abs(a).max()) * float(np.abs(b).max()) * min(a.size, b.size)
        if bound < 2**40 and a.size * b.size > 1 << 16:
            # FFT convolution; exact after rounding while |result| < 2**40
            size = 1 << (a.size + b.size - 1).bit_length()
            prod = np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)
            prod = prod[: a.size + b.size - 1]
            out = np.rint(prod)
            if np.abs(prod - out).max() > 0.25:
                raise CoefficientOverflowError("FFT convolution lost exactness")
            return IntegerPolynomial(out.astype(np.int64))
        if bound < _INT64_BUDGET:
            return IntegerPolynomial(np.convolve(a, b))
        big = np.convolve(a.astype(object), b.astype(object))
        return IntegerPolynomial(big)


def height(poly: IntegerPolynomial) -> int:
    """Largest absolute coefficient; 0 for the zero polynomial."""
    c = poly.coeffs
    return int(np.abs(c).max()) if c.size else 0


def _series(mults, divs, length: int) -> np.ndarray:
    """prod (1 - x^e) over ``mults`` divided by prod (1 - x^e) over ``divs``, mod x^length."""
    c, ok = series_product(np.array(sorted(mults), dtype=np.int64),
                           np.array(sorted(divs, reverse=True), dtype=np.int64), length)
    if not ok:
        raise CoefficientOverflowError(f"prefix sum at length {length} could overflow int64")
    return c


def _mobius_split(n: int, proper: bool):
    """Divisors d of n grouped by mu(n/d) = +1 and -1 (only squarefree n/d matter)."""
    ps = list(factorize(n))
    plus, minus = [], []
    for mask in range(1 << len(ps)):
        m = 1  # m = n/d runs over squarefree divisors of rad(n)
        for i, p in enumerate(ps):
            if mask >> i & 1:
                m *= p
        if proper and m == 1:
            continue
        (minus if bin(mask).count("1") % 2 else plus).append(n // m)
    return plus, minus


def cyclotomic_coeffs(n: int) -> IntegerPolynomial:
    """Exact coefficients of the n-th cyclotomic polynomial."""
    if n < 1:
        raise DomainError(f"cyclotomic polynomial undefined for n = {n}")
    if n == 1:
        poly = IntegerPolynomial.from_list([-1, 1])
    else:
        plus, minus = _mobius_split(n, proper=False)
        poly = IntegerPolynomial(_series(plus, minus, euler_phi(n) + 1))
    for fn in _observers:
        fn(n, poly)
    return poly


def inverse_cyclotomic_coeffs(n: int) -> IntegerPolynomial:
    """Exact coefficients of (x^n - 1) / Phi_n(x), built without dividing by Phi_n."""
    if n < 1:
        raise DomainError(f"inverse cyclotomic polynomial undefined for n = {n}")
    if n == 1:
        return IntegerPolynomial.from_list([1])
    plus, minus = _mobius_split(n, proper=True)
    # exponent of (1 - x^d) is -mu(n/d)
    return IntegerPolynomial(-_series(minus, plus, n - euler_phi(n) + 1))


def product_identity_holds(n: int, phi: IntegerPolynomial | None = None,
                           psi: IntegerPolynomial | None = None) -> bool:
    """Exact coefficientwise check of Phi_n * Psi_n == x^n - 1."""
    phi = phi if phi is not None else cyclotomic_coeffs(n)
    psi = psi if psi is not None else inverse_cyclotomic_coeffs(n)
    prod = (phi * psi).coeffs
    if prod.size != n + 1:
        return False
    return prod[0] == -1 and prod[n] == 1 and not np.any(prod[1:n])


def is_flat(n: int) -> bool:
    return height(cyclotomic_coeffs(n)) == 1


def _as_triple(t) -> TernaryTriple:
    if isinstance(t, TernaryTriple):
        return t
    return TernaryTriple.of(*t[:3])


def is_coefficient_optimal_criterion(t) -> bool:
    """Congruence/inequality test for h(Psi_pqr) = p - 1, in exact integers."""
    p, q, r, _ = _as_triple(t)
    qm, rm = q % p, r % p
    return qm in (1, p - 1) and rm == qm and r * (p - 2) < (p - 1) * (q - 1)


def ternary_inverse_height(p: int, q: int, r: int) -> int:
    """h(Psi_pqr) from the factorisation Psi_pqr(x) = Phi_pq(x) * Psi_pq(x^r).

    Psi_pq(y) has coefficient -1 on y^0..y^(p-1) and +1 on y^q..y^(q+p-1).
    Writing k = m*r + s (0 <= s < r), c(k) is the convolution in m of that
    sign pattern with the column B_s(u) = a_pq(s + u*r). Columns with
    s > deg Phi_pq vanish, and inside a column c is zero away from the two
    sign windows, so only O(p) values of m per column need evaluating.
    """
    a = cyclotomic_coeffs(p * q).coeffs
    D = a.size - 1
    width = min(r, D + 1)
    U = -(-(D + 1) // r)
    cols = np.zeros(U * r, dtype=np.int64)
    cols[: D + 1] = a
    B = cols.reshape(U, r)[:, :width]
    # S[t] = sum_{u <= t} B[u]; S(t) = 0 for t < 0 and S[U-1] for t >= U
    S = np.vstack([np.zeros((1, width), dtype=np.int64), np.cumsum(B, axis=0)])

    def prefix(t):
        return S[np.clip(t + 1, 0, U)]

    last = U + q + p - 1
    m = np.unique(np.concatenate([np.arange(0, min(U + p, last)), np.arange(q, last)]))
    vals = -(prefix(m) - prefix(m - p)) + (prefix(m - q) - prefix(m - q - p))
    return int(np.abs(vals).max())


def is_coefficient_optimal_direct(t, full: bool | None = None) -> bool:
    """Compare h(Psi_n) with p - 1 using computed coefficients.

    ``full=True`` expands Psi_n completely; ``full=False`` uses
    :func:`ternary_inverse_height`. The default expands fully for n <= 10**6.
    """
    p, q, r, n = _as_triple(t)
    if full is None:
        full = n <= 10**6
    h = height(inverse_cyclotomic_coeffs(n)) if full else ternary_inverse_height(p, q, r)
    return h == p - 1


def coefficient_range_check(t, poly: IntegerPolynomial | None = None) -> bool:
    """The coefficient set of Phi_n is a full run of consecutive integers."""
    c = (poly if poly is not None else cyclotomic_coeffs(_as_triple(t).n)).coeffs
    values = np.unique(c)
    return values.size == int(values[-1] - values[0]) + 1


def neighbor_diff_check(t, poly: IntegerPolynomial | None = None) -> bool:
    """|a(k) - a(k-1)| <= 1 for all k, with a(-1) = 0."""
    c = (poly if poly is not None else cyclotomic_coeffs(_as_triple(t).n)).coeffs
    return bool(np.abs(np.diff(c, prepend=0)).max() <= 1)
