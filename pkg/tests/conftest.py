import numpy as np
import pytest

from swarmcast import _kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT-compile (or no-op on the numpy backend) before anything is timed.
    _kernels.warmup()


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
