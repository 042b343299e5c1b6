import pytest

import influenceops as iops


@pytest.fixture(scope="session")
def taxonomy():
    return iops.load_bundled_taxonomy()


@pytest.fixture(scope="session")
def catalog(taxonomy):
    return iops.load_bundled_catalog(taxonomy)


@pytest.fixture(scope="session")
def fixture_spec():
    return iops.load_fixture_spec()


@pytest.fixture(scope="session")
def fixture_corpus(fixture_spec, catalog):
    return iops.generate_corpus(fixture_spec, catalog)


@pytest.fixture(scope="session")
def fixture_cc(fixture_corpus, catalog):
    return iops.classify_corpus(fixture_corpus, catalog)


@pytest.fixture(scope="session")
def hand_cc(catalog):
    """Four incidents with profiles {NR}, {NR,IP}, {NM}, {NR,NM,IP}."""
    from helpers import corpus_from_profiles

    corpus = corpus_from_profiles(
        catalog, [("NR",), ("NR", "IP"), ("NM",), ("NR", "NM", "IP")]
    )
    return iops.classify_corpus(corpus, catalog)
