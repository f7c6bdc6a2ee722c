import os
import tempfile

# Logs go to a scratch directory; the logger is configured at import time.
os.environ.setdefault('FINCAT_LOG_DIR', tempfile.mkdtemp(prefix='fincat-logs-'))

import pytest

from src.dsl import parse_file
from src.gens import generate, preset

FIXTURES_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'fixtures')


@pytest.fixture(autouse=True)
def isolated_ledger(monkeypatch, tmp_path):
    """Every test gets its own ledger database, switched off unless a test turns it on."""
    monkeypatch.setenv('FINCAT_DB_URL', f"sqlite:///{tmp_path / 'ledger.db'}")
    monkeypatch.setenv('FINCAT_LEDGER', 'false')


@pytest.fixture(scope='session')
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope='session')
def load_fixture():
    def load(name):
        doc, _ = parse_file(os.path.join(FIXTURES_DIR, name))
        return doc
    return load


@pytest.fixture(scope='session')
def one():
    return generate(preset('one'))


@pytest.fixture(scope='session')
def b3():
    return generate(preset('cyclic', order=3))


@pytest.fixture(scope='session')
def b4():
    """Z/4 with g -> -g, plus the involution with the same d and eta = 1."""
    return generate(preset('cyclic', eta=1))


@pytest.fixture(scope='session')
def bs3():
    return generate(preset('symmetric3'))


@pytest.fixture(scope='session')
def walk():
    return generate(preset('walk'))


@pytest.fixture(scope='session')
def swap2():
    return generate(preset('swap2'))


@pytest.fixture(scope='session')
def chain():
    return generate(preset('chain'))


@pytest.fixture(scope='session')
def m1f4():
    return generate(preset('matrix', maxdim=1))


@pytest.fixture(scope='session')
def m2f4():
    return generate(preset('matrix'))


@pytest.fixture(scope='session')
def product():
    """B3 x Swap2 with the componentwise dagger."""
    return generate(preset('product'))
