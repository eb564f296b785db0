import functools

import pytest

from heatcount.characters import character_table
from heatcount.groups import build_group

TEST_GROUPS = [
    "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:5", "cyclic:6",
    "symmetric:3", "dihedral:4", "quaternion8", "alternating:4", "symmetric:4",
]


@functools.lru_cache(maxsize=None)
def group_and_table(spec):
    group = build_group(spec)
    return group, character_table(group)


@pytest.fixture(params=TEST_GROUPS)
def gt(request):
    return group_and_table(request.param)
