import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from uehling import AccuracyConfig, PhysicalParams  # noqa: E402


@pytest.fixture
def rel_params():
    return PhysicalParams(Q=1.0)


@pytest.fixture
def cfg():
    return AccuracyConfig()


@pytest.fixture(scope="session")
def reference_values():
    from oracle import load_fixture

    return load_fixture()
