import pytest
from hypothesis import HealthCheck, settings

from nslab.lie import get_lie

settings.register_profile(
    "repro", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def sl2():
    return get_lie("sl2")


@pytest.fixture(scope="session")
def sl3():
    return get_lie("sl3")
