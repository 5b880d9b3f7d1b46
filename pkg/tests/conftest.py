import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from retword.words import oracle_for  # noqa: E402

settings.register_profile("suite", max_examples=200, deadline=None)
settings.load_profile("suite")

_CRITERIA: list[str] = []


def record_criterion(line: str) -> None:
    _CRITERIA.append(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def trib():
    return oracle_for(oracles.TRIBONACCI)


@pytest.fixture(scope="session")
def ex44():
    return oracle_for(oracles.EX_DERIVATION)


@pytest.fixture(scope="session")
def prop52():
    return oracle_for(oracles.PROP_COUNTER)


@pytest.fixture(scope="session")
def tm():
    return oracle_for(oracles.THUE_MORSE)


@pytest.fixture(scope="session")
def fib():
    return oracle_for(oracles.FIBONACCI)
