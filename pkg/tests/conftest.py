import pytest

from redukto.catalog import catalog_get
from redukto.construct import build_hrrwwc, to_shrinking


@pytest.fixture(scope="session")
def m_e():
    return catalog_get("m_e")


@pytest.fixture(scope="session")
def m_e_h():
    return catalog_get("m_e_h")


@pytest.fixture(scope="session")
def dyck1():
    return catalog_get("dyck1")


@pytest.fixture(scope="session")
def anbn_built():
    entry = catalog_get("anbn_gnf")
    spec, report = build_hrrwwc(entry.grammar, 3)
    return entry, spec, report


@pytest.fixture(scope="session")
def dyck_built():
    entry = catalog_get("dyck_gnf")
    spec, report = build_hrrwwc(entry.grammar, 3)
    return entry, spec, report


@pytest.fixture(scope="session")
def m_e_h_shrunk(m_e_h):
    spec, weights = to_shrinking(m_e_h.spec)
    return spec, weights


@pytest.fixture(scope="session")
def anbn_shrunk(anbn_built):
    _, source, _ = anbn_built
    spec, weights = to_shrinking(source)
    return source, spec, weights
