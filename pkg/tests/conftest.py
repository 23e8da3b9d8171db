import pytest
from hypothesis import HealthCheck, settings

from presheafcoh import corpus
from presheafcoh.field import Field

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def F():
    return Field(101)


@pytest.fixture(scope="session")
def Q():
    return Field(None)


@pytest.fixture(scope="session")
def canonical(F):
    return corpus.canonical_corpus(F)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES):
            terminalreporter.write_line(line)
