import pytest

from genlearn.numtheory import GroupInstance


@pytest.fixture
def inst7() -> GroupInstance:
    # The worked 3-bit instance used throughout: p = 7, g = 2, g_a = 4 (a = 2).
    return GroupInstance(n=3, p=7, q=3, g=2, g_a=4, a_secret=2)
