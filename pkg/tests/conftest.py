import pytest

import inquest as iq


@pytest.fixture(scope="session")
def casestudy1():
    return iq.load_dataset(iq.casestudy1_dataset())


@pytest.fixture(scope="session")
def synthetic12():
    return iq.load_dataset(iq.synthetic12_dataset())


@pytest.fixture(scope="session")
def table1_catalog_obj():
    return iq.load_catalog(iq.table1_catalog())


@pytest.fixture(scope="session")
def table1_rules(table1_catalog_obj):
    return iq.generate_rules(table1_catalog_obj)


@pytest.fixture(scope="session")
def casestudy2_catalog_obj():
    return iq.load_catalog(iq.casestudy2_catalog())


@pytest.fixture(scope="session")
def casestudy2_rules(casestudy2_catalog_obj):
    return iq.generate_rules(casestudy2_catalog_obj)
