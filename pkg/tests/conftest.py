from functools import lru_cache

import pytest

from involmod.coxeter import CoxeterSpec, enumerate_group
from involmod.verify import Workbench


@lru_cache(maxsize=None)
def bench(name: str, star=None) -> Workbench:
    """Shared, lazily built tables for a preset; star is None, "flip" or a 0-based tuple."""
    return Workbench(CoxeterSpec.preset(name, star))


@lru_cache(maxsize=None)
def group(name: str, star=None, backend: str = "auto"):
    return enumerate_group(CoxeterSpec.preset(name, star), backend=backend)


def all_stars(name: str) -> list:
    return CoxeterSpec.preset(name).compatible_stars()


@pytest.fixture
def a2():
    return bench("A2")


@pytest.fixture
def a2_flip():
    return bench("A2", "flip")


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
