import pytest

from eicheck.category import poset_category, one_object_category
from eicheck.groups import cyclic_group, preset_group


@pytest.fixture
def a2():
    """Poset category x0 < x1."""
    return poset_category([(0, 1)], 2)


@pytest.fixture
def a3():
    """Chain x0 < x1 < x2."""
    return poset_category([(0, 1), (1, 2), (0, 2)], 3)


@pytest.fixture
def diamond():
    """Bottom, two incomparable middles, top."""
    return poset_category([(0, 1), (0, 2), (1, 3), (2, 3), (0, 3)], 4)


@pytest.fixture
def c2_object():
    return one_object_category(cyclic_group(2))


@pytest.fixture
def s3():
    return preset_group("S3")


@pytest.fixture
def d8():
    return preset_group("D8")
