import pytest

from gradedchar.chartab import character_table
from gradedchar.group import build_catalog_group


@pytest.fixture(scope="session")
def grp():
    return build_catalog_group


@pytest.fixture(scope="session")
def table_of():
    return lambda spec: character_table(build_catalog_group(spec))
