"""Small constructors shared by the test modules."""

from influenceops import Corpus, Incident, classify_corpus


def incident(n, techniques, year=2020, title=None, targets=()):
    return Incident(
        incident_id=f"I-{n:03d}",
        title=title if title is not None else f"Incident {n}",
        year=year,
        targets=tuple(targets),
        techniques=frozenset(techniques),
    )


def corpus_of(techniques_per_incident, source="test"):
    incidents = tuple(
        incident(n, techs) for n, techs in enumerate(techniques_per_incident, start=1)
    )
    return Corpus(incidents, source)


def corpus_from_profiles(catalog, profiles, source="test"):
    """Corpus whose incidents carry exactly the execution techniques of the
    given strategy-id sets, so classification recovers the profiles."""
    rows = []
    for pattern in profiles:
        rows.append({catalog.by_id(s).execution_technique for s in pattern})
    return corpus_of(rows, source)


def classified_from_profiles(catalog, profiles, source="test"):
    return classify_corpus(corpus_from_profiles(catalog, profiles, source), catalog)
