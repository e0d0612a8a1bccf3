import numpy as np
import pytest

from perron_eig import _backend
from perron_eig.matio import load_fixture
from perron_eig.synth import seed_from_env


@pytest.fixture(params=sorted(_backend.BACKENDS))
def backend(request):
    prev = _backend.name
    _backend.use(request.param)
    yield request.param
    _backend.use(prev)


@pytest.fixture(scope="session")
def seed():
    return seed_from_env()


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)


@pytest.fixture(scope="session")
def ex51():
    return load_fixture("ex51")


@pytest.fixture(scope="session")
def ex52():
    return load_fixture("ex52"), load_fixture("ex52_v")


@pytest.fixture(scope="session")
def ex53():
    return load_fixture("ex53")


@pytest.fixture(scope="session")
def ex81():
    return load_fixture("ex81")


@pytest.fixture(scope="session")
def ex81_y():
    return load_fixture("ex81_y")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    keys = [k for k in ("1", "2", "3", "4", "5", "6", "6a", "6b", "6c", "7", "8", "9") if k in RESULTS]
    if not keys:
        return
    terminalreporter.section("acceptance criteria")
    for k in keys:
        terminalreporter.write_line(RESULTS[k])
