import pytest

from ternary_forge.beiter import check_bounds_on_triple
from ternary_forge.cyclotomic import add_observer, remove_observer
from ternary_forge.primes import factorize
from ternary_forge.ternary import TernaryTriple

BOUND_CHECKS = {"ternary_phi": 0}
ACCEPTANCE_LINES: list[str] = []


def _bounds_hook(n, poly):
    """Every ternary Phi_n computed anywhere in the session must satisfy both coefficient bounds."""
    if n < 105 or n % 2 == 0:
        return
    f = factorize(n)
    if len(f) != 3 or any(e != 1 for e in f.values()):
        return
    p, q, r = sorted(f)
    check_bounds_on_triple(TernaryTriple(p, q, r, n), poly)
    BOUND_CHECKS["ternary_phi"] += 1


@pytest.fixture(scope="session", autouse=True)
def global_bounds_hook():
    add_observer(_bounds_hook)
    yield BOUND_CHECKS
    remove_observer(_bounds_hook)


@pytest.fixture
def acceptance_line():
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    if BOUND_CHECKS["ternary_phi"]:
        terminalreporter.write_line(
            f"coefficient bounds checked on {BOUND_CHECKS['ternary_phi']} ternary Phi_n by the global hook")
