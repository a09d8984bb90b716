"""Acceptance gate: one test per criterion, each emitting a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also repeated in the terminal summary.
"""
import math
import sys
import time

import pytest

from conftest import BOUND_CHECKS
from oracles import brute_predicates, factor_all, ternary_by_factoring
from ternary_forge import experiments as ex
from ternary_forge.beiter import BB_DENSITY, beiter_pair_set, bound_params
from ternary_forge.ternary import (
    CoefficientOptimal, CryptoGap, ResidueModPQ, Unconstrained, count_exact, enumerate_ternary,
    ternary_identity_check,
)


def test_criterion_01_constants(acceptance_line):
    t0 = time.perf_counter()
    report, ok = ex.constants_report()
    elapsed = time.perf_counter() - t0
    values = {row[0]: (float(row[1]), float(row[5])) for row in report.rows}
    ok = ok and elapsed < 10 and all(err <= 1e-12 for _, err in values.values())
    detail = ", ".join(f"{k}={v:.15f} (|diff| {e:.1e})" for k, (v, e) in values.items())
    acceptance_line(1, ok, f"{detail}; {elapsed:.2f}s")
    assert ok


def test_criterion_02_golden_coefficients(acceptance_line):
    res = ex.audit_golden()
    ok = res.ok and res.seconds < 60
    acceptance_line(2, ok, f"{res.checked} checks, {len(res.violations)} violations, {res.seconds:.2f}s")
    assert ok, res.violations[:10]


def test_criterion_03_identity_suite(acceptance_line):
    res = ex.audit_identity(10**4)
    acceptance_line(3, res.ok, f"n <= 10^4: {res.checked} polynomials, {len(res.violations)} failures")
    assert res.ok, res.violations[:10]


def test_criterion_04_criterion_matches_direct(acceptance_line):
    res = ex.audit_main2(cap=2 * 10**5, samples=10**4, seed=20240601, sample_max=10**8)
    n = res.notes
    ok = res.ok and n["samples"] == 10**4
    acceptance_line(4, ok, f"exhaustive n <= 2e5 plus {n['samples']} random triples with n <= 1e8: "
                           f"{res.checked} compared, {len(res.violations)} disagreements "
                           f"({n['coefficient_optimal']} + {n['sampled_optimal']} coefficient-optimal)")
    assert ok, res.violations[:10]


def test_criterion_05_bound_soundness(acceptance_line):
    before = BOUND_CHECKS["ternary_phi"]
    res = ex.audit_phi_scan(cap=2 * 10**5, samples=1000, seed=7, ranges=True)
    hooked = BOUND_CHECKS["ternary_phi"] - before
    ok = res.ok and res.checked >= 22296 + 1000 and hooked >= res.checked
    acceptance_line(5, ok, f"{res.checked} ternary Phi_n (exhaustive n <= 2e5 plus 1000 samples), "
                           f"{len(res.violations)} violations; global hook saw {hooked}")
    assert ok, res.violations[:10]


def test_criterion_06_closed_forms(acceptance_line):
    res = ex.audit_closed_forms(200)
    ratio = res.notes["N_BB(10007)/p^2"] / float(BB_DENSITY)
    ok = res.ok and abs(ratio - 1) <= 0.01
    acceptance_line(6, ok, f"{res.checked - 1} primes 5 <= p <= 200 match; "
                           f"N_BB(10007)/p^2 = {res.notes['N_BB(10007)/p^2']:.6f} (x{ratio:.5f} of 25/27)")
    assert ok, res.violations[:10]


def test_criterion_07_kaplan(acceptance_line):
    res = ex.audit_kaplan(samples=500, seed=99)
    ok = res.ok and res.checked == 500
    acceptance_line(7, ok, f"{res.checked} triples with r = +-1 (mod pq), {len(res.violations)} not flat")
    assert ok, res.violations[:10]


def _bb_by_definition(p, q, r):
    bp = bound_params(p, q, r)
    return 3 * min(2 * bp.a + bp.d1, p - bp.d1) <= 2 * p


def test_criterion_08_counting_oracles(acceptance_line):
    factors = factor_all(10**5)
    triples = ternary_by_factoring(10**5, factors)
    preds = brute_predicates(1)
    families = {
        "ternary": (Unconstrained(), lambda p, q, r: True),
        "coefficient-optimal": (CoefficientOptimal(), preds["coefficient-optimal"]),
        "mod-pq a=1": (ResidueModPQ(1), preds["mod-pq"]),
        "mod-pq a=-1": (ResidueModPQ(-1), brute_predicates(-1)["mod-pq"]),
        "crypto-gap": (CryptoGap(), preds["crypto-gap"]),
        "pair-set-bb": (beiter_pair_set(), _bb_by_definition),
    }
    mismatches = []
    for x in (10**3, 10**4, 10**5):
        for name, (c, pred) in families.items():
            want = sum(1 for t in triples if math.prod(t) <= x and pred(*t))
            got = count_exact(x, c)
            if got != want:
                mismatches.append(f"{name} x={x}: {got} vs {want}")
    checks = [ternary_identity_check(x) for x in (10**3, 10**4, 10**5, 10**6, 10**7)]
    offsets = {c.discrepancy for c in checks}
    ident_ok = all(checks) and len(offsets) == 1
    smallest_t = next(enumerate_ternary(10**4)).n
    smallest_co = next(enumerate_ternary(10**4, CoefficientOptimal())).n
    ok = not mismatches and ident_ok and smallest_t == 105 and smallest_co == 561
    acceptance_line(8, ok, f"{len(families) * 3} counts vs factoring, {len(mismatches)} mismatches; "
                           f"identity offset {sorted(offsets)} over x = 1e3..1e7; "
                           f"smallest ternary {smallest_t}, smallest coefficient-optimal {smallest_co}")
    assert ok, mismatches


def test_criterion_09_density_trends(acceptance_line):
    report = ex.density_report([10**6, 10**7, 10**8, 10**9], a=1)
    fracs = report.column("frac_coefficient_optimal")
    ratios_co = report.column("ratio_coefficient_optimal")
    ratios_a = report.column("ratio_mod_pq")
    emitted = all(v is not None and math.isfinite(v) and v > 0 for v in ratios_co + ratios_a)
    decreasing = all(b < a for a, b in zip(fracs, fracs[1:]))
    bb_1e7 = dict(zip(report.column("x"), report.column("frac_bb_certified")))[10**7]
    ok = emitted and decreasing and 0 < bb_1e7 < 1
    fmt = lambda vs: "[" + ", ".join(f"{v:.4f}" for v in vs) + "]"  # noqa: E731
    acceptance_line(9, ok, f"CO/N_T {fmt(fracs)} decreasing={decreasing}; "
                           f"ratio CO {fmt(ratios_co)}; ratio T_1 {fmt(ratios_a)} (reported only); "
                           f"BB-certified fraction at 1e7 = {bb_1e7:.4f} vs 25/27 = {float(BB_DENSITY):.4f}")
    assert ok


def test_criterion_10_performance(acceptance_line):
    t0 = time.perf_counter()
    single = count_exact(10**9, Unconstrained(), threads=1)
    elapsed = time.perf_counter() - t0
    multi = {t: count_exact(10**9, Unconstrained(), threads=t) for t in (2, 4, 8)}
    # independent value check through squarefree almost-prime counts
    ident = ternary_identity_check(10**9)
    ok = elapsed < 300 and all(v == single for v in multi.values()) and ident.holds \
        and ident.direct == single
    acceptance_line(10, ok, f"N_T(1e9) = {single} in {elapsed:.3f}s single-threaded; "
                            f"threads 2/4/8 give {sorted(set(multi.values()))}; "
                            f"identity gives {ident.via_identity} (offset {ident.discrepancy})")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
