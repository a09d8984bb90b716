"""Experiment drivers behind the command line: reports, audit suites and samplers."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .beiter import (
    BB_DENSITY, _bb_residue_table, beiter_pair_set, bb_set, check_bounds_on_triple,
    corrected_beiter_holds, gb_set, n_bb_closed, n_gb_closed,
)
from .constants import REFERENCE, compute_c1, compute_c2, prime_reciprocal_sum_zeta
from .cyclotomic import (
    coefficient_range_check, cyclotomic_coeffs, height, inverse_cyclotomic_coeffs,
    is_coefficient_optimal_criterion, neighbor_diff_check, product_identity_holds,
    ternary_inverse_height,
)
from .errors import TernaryForgeError, UnsupportedError
from .primes import euler_phi_table, prime_array
from .report import ExperimentReport, fmt_value
from .ternary import (
    CoefficientOptimal, CryptoGap, ResidueModPQ, TernaryTriple, Unconstrained,
    count_ternary, describe, enumerate_ternary,
)

CONSTANT_TOL = 1e-12
DEFAULT_EXHAUSTIVE_CAP = 2 * 10**5
DEFAULT_SAMPLES = 10_000
#: Random triples for the coefficient-optimality check are drawn with n up to this.
MAIN2_SAMPLE_MAX = 10**8
#: Sampled Phi_n (bounds, flatness) are expanded completely, so n stays moderate.
PHI_SAMPLE_MAX = 3 * 10**6
DEFAULT_P_MAX = 200
IDENTITY_MAX = 10**4

CONSTRAINTS = ("ternary", "coefficient-optimal", "mod-pq", "pair-set-bb", "crypto-gap")


def make_constraint(name: str, a: int = 1):
    if name == "ternary":
        return Unconstrained()
    if name == "coefficient-optimal":
        return CoefficientOptimal()
    if name == "mod-pq":
        return ResidueModPQ(a)
    if name == "pair-set-bb":
        return beiter_pair_set()
    if name == "crypto-gap":
        return CryptoGap()
    raise UnsupportedError(f"unknown constraint {name!r}; choose from {', '.join(CONSTRAINTS)}")


# -- constants / count / coeffs ---------------------------------------------


def constants_report() -> tuple[ExperimentReport, bool]:
    values = {
        "C1": compute_c1(CONSTANT_TOL),
        "C2": compute_c2(CONSTANT_TOL),
        "prime_sum": prime_reciprocal_sum_zeta(CONSTANT_TOL),
    }
    rows, ok = [], True
    for name, cv in values.items():
        ref = REFERENCE[name]
        err = abs(cv.value - ref)
        good = err <= CONSTANT_TOL and cv.tail_bound <= CONSTANT_TOL
        ok &= good
        rows.append([name, format(cv.value, ".15f"), format(cv.tail_bound, ".3e"), cv.terms_used,
                     repr(ref), format(err, ".3e"), "ok" if good else "MISMATCH"])
    columns = ["constant", "value", "error_bound", "terms_used", "reference", "abs_diff", "status"]
    return ExperimentReport("constants", {"tol": CONSTANT_TOL}, columns, rows), ok


def count_report(xs, constraint_name: str, a: int = 1, threads: int = 1) -> ExperimentReport:
    c = make_constraint(constraint_name, a)
    rows = []
    for x in sorted(set(xs)):
        rep = count_ternary(x, c, threads=threads)
        if isinstance(c, CryptoGap):
            rows.append([x, rep.count, None, None])
        else:
            rows.append([x, rep.count, rep.predicted, rep.ratio])
    params = {"x": sorted(set(xs)), "constraint": describe(c)}
    return ExperimentReport("count", params, ["x", "count", "predicted", "ratio"], rows)


def coeffs_report(n: int, inverse: bool = False) -> ExperimentReport:
    poly = inverse_cyclotomic_coeffs(n) if inverse else cyclotomic_coeffs(n)
    rows = [[k, v] for k, v in enumerate(poly.tolist())]
    params = {"n": n, "polynomial": "Psi" if inverse else "Phi",
              "degree": poly.degree, "height": height(poly)}
    return ExperimentReport("coeffs", params, ["k", "coefficient"], rows)


# -- samplers ---------------------------------------------------------------


def _pick(rng: random.Random, primes: np.ndarray, lo: int, hi: int):
    """Uniform prime in (lo, hi], or None."""
    i = int(np.searchsorted(primes, lo, side="right"))
    j = int(np.searchsorted(primes, hi, side="right"))
    return int(primes[rng.randrange(i, j)]) if j > i else None


def sample_triples(rng: random.Random, count: int, n_max: int) -> list[TernaryTriple]:
    """Distinct triples drawn by choosing p, then q, then r uniformly in their admissible ranges.

    Not uniform in n: small and large p are both well represented.
    """
    primes = prime_array(n_max // 15)
    out: dict[int, TernaryTriple] = {}
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        p = _pick(rng, primes, 2, round(n_max ** (1 / 3)))
        q = _pick(rng, primes, p, math.isqrt(n_max // p)) if p else None
        r = _pick(rng, primes, q, n_max // (p * q)) if q else None
        if r and r > q:
            out.setdefault(p * q * r, TernaryTriple(p, q, r, p * q * r))
    return list(out.values())


def _progression_primes(primes: np.ndarray, lo: int, hi: int, modulus: int, residues) -> np.ndarray:
    seg = primes[np.searchsorted(primes, lo, side="right"): np.searchsorted(primes, hi, side="right")]
    return seg[np.isin(seg % modulus, list(residues))]


def sample_near_criterion(rng: random.Random, count: int, n_max: int) -> list[TernaryTriple]:
    """Triples with q = r = +-1 (mod p) and r close to (p-1)(q-1)/(p-2), on both sides."""
    primes = prime_array(n_max // 15)
    out: dict[int, TernaryTriple] = {}
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        p = _pick(rng, primes, 2, round(n_max ** (1 / 3)))
        qs = _progression_primes(primes, p, math.isqrt(n_max // p), p, (1, p - 1))
        if not qs.size:
            continue
        q = int(qs[rng.randrange(qs.size)])
        top = min(n_max // (p * q), 2 * q + 4 * p * p)
        rs = _progression_primes(primes, q, top, p, (q % p,))
        if not rs.size:
            continue
        edge = ((p - 1) * (q - 1) - 1) // (p - 2) if p > 2 else top
        k = int(np.searchsorted(rs, edge, side="right"))
        lo, hi = max(0, k - 3), min(rs.size, k + 3)
        r = int(rs[rng.randrange(lo, hi)]) if hi > lo else int(rs[rng.randrange(rs.size)])
        out.setdefault(p * q * r, TernaryTriple(p, q, r, p * q * r))
    return list(out.values())


def sample_kaplan(rng: random.Random, count: int, n_max: int) -> list[TernaryTriple]:
    """Distinct triples with r = +-1 (mod pq) and pqr <= n_max."""
    primes = prime_array(max(n_max // 15, 2))
    pairs = []
    for i, p in enumerate(primes[1:].tolist(), start=1):
        if p * (p + 2) * (p * (p + 2) - 1) > n_max:
            break
        for q in primes[i + 1:].tolist():
            if p * q * (p * q - 1) > n_max:
                break
            pairs.append((p, q))
    out: dict[int, TernaryTriple] = {}
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        p, q = pairs[rng.randrange(len(pairs))]
        m = p * q
        rs = _progression_primes(primes, q, n_max // m, m, (1, m - 1))
        if rs.size:
            r = int(rs[rng.randrange(rs.size)])
            out.setdefault(m * r, TernaryTriple(p, q, r, m * r))
    return list(out.values())


# -- audit suites -----------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations


def _timed(fn):
    def run(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def audit_golden() -> SuiteResult:
    """Known small-n facts about Phi_n and Psi_n."""
    res = SuiteResult("golden")
    phi105 = cyclotomic_coeffs(105)
    res.checked += 1
    if phi105[7] != -2:
        res.violations.append(f"a_105(7) = {phi105[7]}, expected -2")
    for n in range(2, 105):
        res.checked += 1
        if height(cyclotomic_coeffs(n)) != 1:
            res.violations.append(f"h(Phi_{n}) != 1")
    for n in range(1, 561):
        res.checked += 1
        if height(inverse_cyclotomic_coeffs(n)) > 1:
            res.violations.append(f"h(Psi_{n}) > 1")
    res.checked += 1
    if height(inverse_cyclotomic_coeffs(561)) != 2:
        res.violations.append("h(Psi_561) != 2")
    res.notes["h(Phi_105)"] = height(phi105)
    return res


@_timed
def audit_main2(cap: int = DEFAULT_EXHAUSTIVE_CAP, samples: int = DEFAULT_SAMPLES,
                seed: int = 0, sample_max: int = MAIN2_SAMPLE_MAX) -> SuiteResult:
    """Congruence criterion against the computed height of Psi_n."""
    res = SuiteResult("main2")
    optimal = 0
    for t in enumerate_ternary(cap):
        h = height(inverse_cyclotomic_coeffs(t.n))
        crit = is_coefficient_optimal_criterion(t)
        optimal += crit
        res.checked += 1
        if crit != (h == t.p - 1) or h > t.p - 1:
            res.violations.append(f"n={t.n} {t[:3]}: criterion {crit}, h(Psi)={h}")
    rng = random.Random(seed)
    half = samples // 2
    pool = sample_triples(rng, samples - half, sample_max) + sample_near_criterion(rng, half, sample_max)
    sampled_optimal = 0
    for t in pool:
        h = ternary_inverse_height(t.p, t.q, t.r)
        crit = is_coefficient_optimal_criterion(t)
        sampled_optimal += crit
        res.checked += 1
        if crit != (h == t.p - 1) or h > t.p - 1:
            res.violations.append(f"n={t.n} {t[:3]}: criterion {crit}, h(Psi)={h}")
    res.notes.update(exhaustive_cap=cap, coefficient_optimal=optimal, samples=len(pool),
                     sampled_optimal=sampled_optimal)
    return res


@_timed
def audit_phi_scan(cap: int = DEFAULT_EXHAUSTIVE_CAP, samples: int = 0, seed: int = 0,
                   sample_max: int = PHI_SAMPLE_MAX, bounds: bool = True,
                   ranges: bool = True) -> SuiteResult:
    """Expand Phi_n for ternary n: coefficient bounds, certified 2p/3 bound, consecutive range."""
    name = "+".join(s for s, on in (("bounds", bounds), ("range", ranges)) if on)
    res = SuiteResult(name)
    triples = list(enumerate_ternary(cap))
    triples += sample_triples(random.Random(seed), samples, sample_max) if samples else []
    certified = holds = 0
    for t in triples:
        poly = cyclotomic_coeffs(t.n)
        res.checked += 1
        if bounds:
            try:
                check_bounds_on_triple(t, poly)
            except TernaryForgeError as exc:
                res.violations.append(str(exc))
            ok = corrected_beiter_holds(t, poly)
            holds += ok
            if _bb_residue_table(t.p)[t.q % t.p, t.r % t.p]:
                certified += 1
                if not ok:
                    res.violations.append(f"n={t.n}: certified pair but 3h > 2p")
        if ranges:
            if not coefficient_range_check(t, poly):
                res.violations.append(f"n={t.n}: coefficients not a consecutive run")
            if not neighbor_diff_check(t, poly):
                res.violations.append(f"n={t.n}: neighbouring coefficients jump by more than 1")
    res.notes.update(exhaustive_cap=cap, samples=samples)
    if bounds:
        res.notes.update(bb_certified=certified, corrected_beiter_holds=holds)
    return res


@_timed
def audit_closed_forms(p_max: int = DEFAULT_P_MAX) -> SuiteResult:
    """Brute-force |GB(p)|, |BB(p)| and the residue-pair count against the closed forms."""
    res = SuiteResult("ngb")
    for p in prime_array(p_max).tolist():
        if p < 5:
            continue
        res.checked += 1
        ngb, nbb = len(gb_set(p)), len(bb_set(p))
        if ngb != n_gb_closed(p):
            res.violations.append(f"p={p}: |GB|={ngb}, closed form {n_gb_closed(p)}")
        if nbb != n_bb_closed(p):
            res.violations.append(f"p={p}: |BB|={nbb}, closed form {n_bb_closed(p)}")
        members = int(_bb_residue_table(p).sum())
        if members != nbb:
            res.violations.append(f"p={p}: {members} member residue pairs vs |BB|={nbb}")
    big = 10007
    res.notes["N_BB(10007)/p^2"] = n_bb_closed(big) / big**2
    res.checked += 1
    if abs(n_bb_closed(big) / big**2 / float(BB_DENSITY) - 1) > 0.01:
        res.violations.append("N_BB(10007)/p^2 not within 1% of 25/27")
    return res


@_timed
def audit_identity(n_max: int = IDENTITY_MAX) -> SuiteResult:
    """Phi_n Psi_n = x^n - 1, deg Phi_n = phi(n), deg Psi_n = n - phi(n), palindromic Phi_n."""
    res = SuiteResult("identity")
    phis = euler_phi_table(n_max)
    for n in range(1, n_max + 1):
        phi, psi = cyclotomic_coeffs(n), inverse_cyclotomic_coeffs(n)
        res.checked += 1
        if phi.degree != phis[n] or psi.degree != n - phis[n]:
            res.violations.append(f"n={n}: degrees {phi.degree}, {psi.degree}")
        if n > 1 and not np.array_equal(phi.coeffs, phi.coeffs[::-1]):
            res.violations.append(f"n={n}: Phi_n not palindromic")
        if not product_identity_holds(n, phi, psi):
            res.violations.append(f"n={n}: Phi_n * Psi_n != x^n - 1")
    return res


@_timed
def audit_kaplan(samples: int = 500, seed: int = 0, sample_max: int = PHI_SAMPLE_MAX) -> SuiteResult:
    """Phi_pqr is flat whenever r = +-1 (mod pq)."""
    res = SuiteResult("kaplan")
    for t in sample_kaplan(random.Random(seed), samples, sample_max):
        res.checked += 1
        h = height(cyclotomic_coeffs(t.n))
        if h != 1:
            res.violations.append(f"n={t.n} {t[:3]}: height {h}")
    return res


def audit_report(results: list[SuiteResult], params: dict) -> ExperimentReport:
    rows = [[r.name, r.checked, len(r.violations), "ok" if r.ok else "FAIL",
             round(r.seconds, 2), ";".join(f"{k}={fmt_value(v)}" for k, v in sorted(r.notes.items()))]
            for r in results]
    return ExperimentReport("audit", params,
                            ["suite", "checked", "violations", "status", "seconds", "notes"], rows)


# -- density ----------------------------------------------------------------


DENSITY_COLUMNS = [
    "x", "N_T", "coefficient_optimal", "mod_pq", "bb_certified",
    "frac_coefficient_optimal", "frac_bb_certified",
    "ratio_N_T", "ratio_coefficient_optimal", "ratio_mod_pq", "ratio_bb_certified",
]


def density_report(xs, a: int = 1, threads: int = 1) -> ExperimentReport:
    rows = []
    for x in sorted(set(xs)):
        nt = count_ternary(x, Unconstrained(), threads)
        co = count_ternary(x, CoefficientOptimal(), threads)
        ta = count_ternary(x, ResidueModPQ(a), threads)
        bb = count_ternary(x, beiter_pair_set(), threads)
        total = nt.count or 1
        rows.append([x, nt.count, co.count, ta.count, bb.count,
                     co.count / total, bb.count / total,
                     nt.ratio, co.ratio, ta.ratio, bb.ratio])
    params = {"x": sorted(set(xs)), "a": a, "bb_target": str(BB_DENSITY)}
    return ExperimentReport("density", params, DENSITY_COLUMNS, rows)


PLOT_SERIES = {
    "ternary": "ratio_N_T",
    "coefficient_optimal": "ratio_coefficient_optimal",
    "mod_pq": "ratio_mod_pq",
    "bb_certified": "ratio_bb_certified",
}


def write_plot_data(report: ExperimentReport, out: Path) -> list[Path]:
    """One whitespace-separated ``x ratio`` file per counted family."""
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    xs = report.column("x")
    for name, col in PLOT_SERIES.items():
        path = out / f"density_{name}.dat"
        lines = [f"# x {col}"]
        lines += [f"{x} {fmt_value(v)}" for x, v in zip(xs, report.column(col))]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        paths.append(path)
    path = out / "density_fractions.dat"
    lines = ["# x frac_coefficient_optimal frac_bb_certified"]
    lines += [f"{x} {fmt_value(u)} {fmt_value(v)}" for x, u, v in
              zip(xs, report.column("frac_coefficient_optimal"), report.column("frac_bb_certified"))]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    paths.append(path)
    return paths
