import pytest

from simcache.utilities.testing import makeGrid, makePair


@pytest.fixture(autouse=True)
def no_environment_config(monkeypatch):
    # only the internal configuration file is visible to tests
    monkeypatch.delenv('simcache_config', raising=False)


@pytest.fixture
def pair():
    return makePair()


@pytest.fixture
def grid():
    return makeGrid(10, 10)


@pytest.fixture
def out_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return str(path)

