import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cdakit.files import fixture_array, fixture_path, running_example  # noqa: E402


@pytest.fixture(scope="session")
def shop():
    return running_example()


@pytest.fixture(scope="session")
def shop_free():
    return running_example(constrained=False)


@pytest.fixture(scope="session")
def fig():
    return fixture_array


@pytest.fixture(scope="session")
def data_path():
    return fixture_path
