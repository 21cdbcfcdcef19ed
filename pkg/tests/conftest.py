import pytest

from qweibull._kernels import warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # Pay the JIT compilation cost once, outside any timed assertion.
    warmup()
