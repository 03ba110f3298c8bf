# conftest.py
# Shared pytest fixtures and the slow-test switch

import os

import numpy as np
import pytest


def pytest_collection_modifyitems(config, items):
    if os.getenv("QUDIT_SLOW", "").strip().lower() in ("1", "true", "yes", "on"):
        return
    skip_slow = pytest.mark.skip(reason="slow test; set QUDIT_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
