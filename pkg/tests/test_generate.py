import json
import random
from collections import Counter
from dataclasses import replace

import pytest

from influenceops import (
    GeneratorSpec,
    InfeasibleSpec,
    ParseError,
    SchemaError,
    ZeroIncidents,
    classify_corpus,
    corpus_to_csv,
    generate_corpus,
    loads_generator_spec,
    prevalence,
    size_distribution,
)

import oracle

SOLVER_TARGETS_DOC = """
{
  "mode": "marginal-solver",
  "seed": 42,
  "unmapped_count": 1,
  "marginals": {"NR": 78, "NM": 53, "IP": 51, "NS": 39, "NA": 34, "CNR": 26, "TD": 24},
  "size_distribution": {"1": 6, "2": 11, "3": 14, "4": 24, "5": 15, "6": 6, "7": 4}
}
"""


def exact_spec(pattern_counts, seed=42, unmapped=0):
    return GeneratorSpec(
        mode="exact-patterns",
        pattern_counts={frozenset(p): n for p, n in pattern_counts.items()},
        unmapped_count=unmapped,
        seed=seed,
    )


def mapped_profiles(corpus, catalog):
    cc = classify_corpus(corpus, catalog)
    return [set(p.strategies) for p in cc.profiles if p.mapped]


# --- exact mode ----------------------------------------------------------------


def test_exact_mode_construction_recovers_patterns(catalog):
    spec = exact_spec({("NR",): 1, ("NR", "IP"): 2})
    corpus = generate_corpus(spec, catalog)
    assert len(corpus) == 3
    recovered = Counter(frozenset(p) for p in mapped_profiles(corpus, catalog))
    assert recovered == Counter({frozenset({"NR"}): 1, frozenset({"NR", "IP"}): 2})


def test_exact_mode_unmapped_incidents(catalog):
    spec = exact_spec({("NR",): 2}, unmapped=3)
    corpus = generate_corpus(spec, catalog)
    cc = classify_corpus(corpus, catalog)
    assert cc.total_count == 5
    assert cc.mapped_count == 2


def test_zero_incident_spec_rejected(catalog):
    with pytest.raises(ZeroIncidents):
        generate_corpus(exact_spec({}), catalog)


def test_include_preparation_adds_pipelines_without_changing_classification(catalog):
    bare = generate_corpus(exact_spec({("NR", "TD"): 1}), catalog)
    full = generate_corpus(
        replace(exact_spec({("NR", "TD"): 1}), include_preparation=True), catalog
    )
    nr, td = catalog.by_id("NR"), catalog.by_id("TD")
    assert bare.incidents[0].techniques == {nr.execution_technique, td.execution_technique}
    assert full.incidents[0].techniques == (
        {nr.execution_technique, td.execution_technique}
        | nr.preparation_techniques
        | td.preparation_techniques
    )
    assert mapped_profiles(bare, catalog) == mapped_profiles(full, catalog)


# --- solver mode ---------------------------------------------------------------


def test_solver_satisfies_both_constraint_families(catalog):
    spec = loads_generator_spec(SOLVER_TARGETS_DOC)
    corpus = generate_corpus(spec, catalog)
    assert len(corpus) == 81
    profiles = mapped_profiles(corpus, catalog)
    assert len(profiles) == 80
    for strategy_id, wanted in spec.marginals.items():
        assert oracle.strategy_count(profiles, strategy_id) == wanted
    assert oracle.size_counts(profiles) == spec.size_distribution
    # handshake: 305 on both sides
    assert sum(spec.marginals.values()) == 305
    assert sum(len(p) for p in profiles) == 305


def test_solver_handshake_violation_cites_identity(catalog):
    spec = loads_generator_spec(SOLVER_TARGETS_DOC)
    bad = replace(spec, marginals={**spec.marginals, "TD": 25})
    with pytest.raises(InfeasibleSpec) as err:
        generate_corpus(bad, catalog)
    assert "handshake" in str(err.value)


def test_solver_respects_pinned_minimums(catalog, fixture_spec, fixture_corpus):
    profiles = mapped_profiles(fixture_corpus, catalog)
    for pattern, minimum in fixture_spec.pinned_patterns.items():
        assert oracle.exact_count(profiles, pattern) >= minimum


def test_pinned_pattern_exceeding_marginal_is_infeasible(catalog):
    spec = GeneratorSpec(
        mode="marginal-solver",
        marginals={"NR": 1, "NS": 1},
        size_distribution={2: 1},
        pinned_patterns={frozenset({"NR", "TD"}): 1},
        seed=1,
    )
    with pytest.raises(InfeasibleSpec):
        generate_corpus(spec, catalog)


def test_solver_detects_structurally_impossible_spec(catalog):
    # handshake holds (3+2 = 3+1+1) but a size-3 profile needs three
    # distinct strategies and only two have any budget
    spec = GeneratorSpec(
        mode="marginal-solver",
        marginals={"NR": 3, "NS": 2},
        size_distribution={3: 1, 1: 2},
        seed=1,
    )
    with pytest.raises(InfeasibleSpec):
        generate_corpus(spec, catalog)


def test_solver_randomized_feasible_specs(catalog):
    """Aggregates of any realizable pattern multiset must be solvable."""
    rng = random.Random(20260811)
    ids = list(catalog.ids())
    for _ in range(150):
        n_incidents = rng.randrange(1, 30)
        patterns = [
            frozenset(rng.sample(ids, rng.randrange(1, 8))) for _ in range(n_incidents)
        ]
        marginals = Counter(s for p in patterns for s in p)
        sizes = Counter(len(p) for p in patterns)
        spec = GeneratorSpec(
            mode="marginal-solver",
            marginals=dict(marginals),
            size_distribution=dict(sizes),
            seed=rng.randrange(2**32),
        )
        corpus = generate_corpus(spec, catalog)
        profiles = mapped_profiles(corpus, catalog)
        assert oracle.size_counts(profiles) == dict(sizes)
        for strategy_id in ids:
            assert oracle.strategy_count(profiles, strategy_id) == marginals.get(strategy_id, 0)


# --- determinism ---------------------------------------------------------------


def test_generation_is_deterministic(catalog, fixture_spec):
    a = generate_corpus(fixture_spec, catalog)
    b = generate_corpus(fixture_spec, catalog)
    assert corpus_to_csv(a) == corpus_to_csv(b)


def test_seed_changes_layout_but_not_aggregates(catalog):
    spec = loads_generator_spec(SOLVER_TARGETS_DOC)
    other = replace(spec, seed=7)
    a, b = generate_corpus(spec, catalog), generate_corpus(other, catalog)
    assert corpus_to_csv(a) != corpus_to_csv(b)
    for corpus in (a, b):
        cc = classify_corpus(corpus, catalog)
        assert prevalence(cc).count("NR") == 78
        assert size_distribution(cc).counts[4] == 24


def test_exact_mode_is_order_insensitive(catalog):
    forward = exact_spec({("NR",): 2, ("TD", "IP"): 1})
    backward = GeneratorSpec(
        mode="exact-patterns",
        pattern_counts={frozenset({"TD", "IP"}): 1, frozenset({"NR"}): 2},
        unmapped_count=0,
        seed=42,
    )
    assert corpus_to_csv(generate_corpus(forward, catalog)) == corpus_to_csv(
        generate_corpus(backward, catalog)
    )


# --- spec parsing --------------------------------------------------------------


def test_spec_parse_errors():
    with pytest.raises(ParseError):
        loads_generator_spec("{nope")
    with pytest.raises(SchemaError):
        loads_generator_spec('{"mode": "telepathy"}')
    with pytest.raises(SchemaError):
        loads_generator_spec(
            '{"mode": "marginal-solver", "marginals": {"NR": -1}, "size_distribution": {}}'
        )
    with pytest.raises(SchemaError):
        loads_generator_spec(
            '{"mode": "exact-patterns",'
            ' "pattern_counts": [{"strategies": ["NR", "NR"], "count": 1}]}'
        )


def test_spec_with_unknown_strategy_id_rejected(catalog):
    spec = exact_spec({("NR", "ZZ"): 1})
    with pytest.raises(SchemaError):
        generate_corpus(spec, catalog)


def test_fixture_spec_document_round_trips(fixture_spec):
    assert fixture_spec.mode == "marginal-solver"
    assert fixture_spec.unmapped_count == 1
    assert sum(fixture_spec.marginals.values()) == 305
    assert sum(k * v for k, v in fixture_spec.size_distribution.items()) == 305
    assert len(fixture_spec.pinned_patterns) == 30
    assert sum(fixture_spec.pinned_patterns.values()) == 80
