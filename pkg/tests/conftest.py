import pytest

from wifimap import kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    """Compile the jitted kernels once so timed tests measure steady state."""
    kernels.warmup()
