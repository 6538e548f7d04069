import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from algebroids import shipped_example  # noqa: E402
from algebroids.corpus import generate_corpus  # noqa: E402


@pytest.fixture(scope="session")
def corpus():
    return generate_corpus(seed=0)


@pytest.fixture(scope="session")
def z2_file():
    return shipped_example("z2_swap_f3")


@pytest.fixture(scope="session")
def klein_file():
    return shipped_example("klein_f3")


@pytest.fixture(scope="session")
def flat_file():
    return shipped_example("flat_f2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
