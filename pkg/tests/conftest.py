import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from quaddec.corpus import domain_corpus
from quaddec.qdomain import QuadratureDomain

settings.register_profile("repo", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def disc():
    return QuadratureDomain.disc()


@pytest.fixture(scope="session")
def card04():
    return QuadratureDomain.cardioid(0.4)


@pytest.fixture(scope="session")
def corpus_domains():
    return domain_corpus()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
