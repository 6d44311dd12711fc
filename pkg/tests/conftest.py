import os

import pytest

from siltstab.algebra import build_basis, load_algebra

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "src", "siltstab", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.abspath(os.path.join(FIXTURE_DIR, name))


@pytest.fixture(scope="session")
def threecycle():
    return build_basis(load_algebra(fixture_path("threecycle.json")))


@pytest.fixture(scope="session")
def a2():
    return build_basis(load_algebra(fixture_path("a2.json")))


@pytest.fixture(scope="session")
def point():
    return build_basis(load_algebra(fixture_path("point.json")))


@pytest.fixture(scope="session")
def threecycle_indecs(threecycle):
    from siltstab import repmod
    mods = repmod.enumerate_indecomposables(threecycle, 3)
    return {repmod.module_label(m): m for m in mods}


@pytest.fixture(scope="session")
def threecycle_catalog(threecycle):
    from siltstab import twoterm
    return twoterm.PresiltingCatalog(threecycle, 3)


@pytest.fixture(scope="session")
def threecycle_siltings(threecycle_catalog):
    from siltstab import twoterm
    return twoterm.enumerate_2silt(threecycle_catalog)
