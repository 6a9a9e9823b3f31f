import pytest
from hypothesis import settings

from qvfield import build_algebra

settings.register_profile("repo", max_examples=40, deadline=None)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def gl2():
    return build_algebra("glq_holo", 2)


@pytest.fixture(scope="session")
def gl2_m1():
    return build_algebra("glq_holo", 2, root_order=1)


@pytest.fixture(scope="session")
def cx2():
    return build_algebra("glq_complex", 2)


@pytest.fixture(scope="session")
def so3():
    return build_algebra("soq_real", 3)
