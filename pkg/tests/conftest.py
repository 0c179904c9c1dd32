from pathlib import Path

import pytest

from fuglede.config import Config
from fuglede.constructions import paley_i, paley_ii, sylvester


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_collection_modifyitems(config, items):
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    skip_catalog = pytest.mark.skip(
        reason=f"no vendored catalog under {Config.FIXTURES_DIR}; run `fuglede fetch --order <m> --vendor`"
    )
    have_catalog = catalog_available()
    for item in items:
        if "slow" in item.keywords and not config.getoption("--runslow"):
            item.add_marker(skip_slow)
        if "catalog" in item.keywords and not have_catalog:
            item.add_marker(skip_catalog)


def catalog_available(fixtures_dir: Path = Config.FIXTURES_DIR) -> bool:
    """True when every pinned catalog file is vendored."""
    return all(
        (fixtures_dir / f"order-{order}" / name).is_file()
        for order, names in Config.CATALOG_FILES.items()
        for name in names
    )


@pytest.fixture(scope="session")
def paley_matrices():
    """Known catalog-class members for orders 20, 24 and 28 with their dephased ranks."""
    return [
        ("paley-i-19", paley_i(19), 18),
        ("paley-i-23", paley_i(23), 11),
        ("paley-ii-13", paley_ii(13), 26),
    ]


@pytest.fixture(scope="session")
def sylvester_16():
    return sylvester(4)


@pytest.fixture
def cache_dir(tmp_path):
    path = tmp_path / "cache"
    path.mkdir()
    return path


@pytest.fixture
def fixtures_dir(tmp_path):
    path = tmp_path / "catalog"
    path.mkdir()
    return path
