import sys

import numpy as np
import pytest
from hypothesis import settings

from banachlab.catalog import PLANAR_CATALOG, parse_catalog

settings.register_profile("repo", deadline=None, max_examples=30, derandomize=True, print_blob=True)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def planar_spaces():
    return {s: parse_catalog(s) for s in PLANAR_CATALOG}


@pytest.fixture(scope="session")
def euclid():
    return parse_catalog("lp(2,2)")


@pytest.fixture(scope="session")
def l1():
    return parse_catalog("lp(2,1)")


@pytest.fixture(scope="session")
def linf():
    return parse_catalog("lp(2,inf)")


@pytest.fixture(scope="session")
def ex61():
    return parse_catalog("arc2d(ex61)")


@pytest.fixture(scope="session")
def fig5():
    return parse_catalog("arc2d(fig5)")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acc.LINES:
            terminalreporter.write_line(line)
