import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from quinncalc.category import builtin_c5, fibonacci, pointed_z2, trivial_category

TESTS = Path(__file__).parent
FIXTURES = TESTS / "fixtures"
sys.path.insert(0, str(TESTS))

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def c5():
    return builtin_c5()


def valid_categories():
    """Every valid category the suite builds, keyed by a readable id."""
    return {
        "c5": builtin_c5(),
        "trivial": trivial_category(5),
        "z2": pointed_z2(5),
        "z2-twisted-p7": pointed_z2(7, twisted=True),
        "fib-p11": fibonacci(11),
        "fib-p19": fibonacci(19),
    }


@pytest.fixture(params=sorted(valid_categories()), scope="session")
def any_cat(request):
    return valid_categories()[request.param]


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        title, ok = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}  {'PASS' if ok else 'FAIL'}  {title}")
