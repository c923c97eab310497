import os
import sys

import pytest

pytest_plugins = ["pytest_asyncio"]

# Add the src directory to the Python path
sys.path.append(os.path.join(os.path.dirname(os.path.abspath(__file__)), "src"))


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run tests on groups of order 5^5")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: needs --runslow (order 3125 groups)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
