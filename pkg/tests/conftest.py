import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dqg.base import symmetric_group_3  # noqa: E402
from dqg.builders import example_crossed, example_group_algebra, example_pair, example_sweedler  # noqa: E402
from dqg.checks import run_suite  # noqa: E402

BUILDERS = {
    "T": example_pair,
    "C": example_crossed,
    "G2": example_group_algebra,
    "S3": lambda: example_group_algebra(symmetric_group_3()),
    "Sw": example_sweedler,
}


@lru_cache(maxsize=None)
def fixture_instance(name):
    return BUILDERS[name]()


@lru_cache(maxsize=None)
def full_report(name):
    return tuple(run_suite(fixture_instance(name), "all"))


@pytest.fixture(scope="session")
def T():
    return fixture_instance("T")


@pytest.fixture(scope="session")
def C():
    return fixture_instance("C")


@pytest.fixture(scope="session")
def G2():
    return fixture_instance("G2")


@pytest.fixture(scope="session")
def S3():
    return fixture_instance("S3")


@pytest.fixture(scope="session")
def Sw():
    return fixture_instance("Sw")
