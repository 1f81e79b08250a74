import pytest

from hamflow.diagram import DISK, SPHERE
from hamflow.enumerate import AtlasRequest, enumerate_atlas
from hamflow.poset import build_poset


@pytest.fixture(scope="session")
def disk12():
    return enumerate_atlas(AtlasRequest(1, 2, DISK))


@pytest.fixture(scope="session")
def disk21():
    return enumerate_atlas(AtlasRequest(2, 1, DISK))


@pytest.fixture(scope="session")
def disk13():
    return enumerate_atlas(AtlasRequest(1, 3, DISK))


@pytest.fixture(scope="session")
def poset12(disk12):
    return build_poset(disk12)


@pytest.fixture(scope="session")
def sphere_atlases():
    return {c: enumerate_atlas(AtlasRequest(*c, SPHERE)) for c in ((1, 1), (1, 2), (1, 3), (2, 2))}


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
