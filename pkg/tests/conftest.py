import numpy as np
import pytest

from CompoundCert.Debugger import DebuggerConfiguration


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long integrations and dense certification grids")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def quiet_debugger():
    # The command line turns debugging on with --debug; every test starts quiet
    DebuggerConfiguration.DEBUGGING = False
    DebuggerConfiguration.CREATE_DEBUG_FILES = False
    yield
    DebuggerConfiguration.DEBUGGING = False
    DebuggerConfiguration.CREATE_DEBUG_FILES = False
