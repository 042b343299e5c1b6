"""Seven-strategy model of influence operations in social networks.

Loads a phase/tactic/technique taxonomy and a catalog of seven disjoint
strategy pipelines, classifies DISARM-tagged incident corpora into strategy
sets, and computes prevalence, combination, co-occurrence, and conditional
probability statistics with exact arithmetic.
"""

__version__ = "0.1.0"

from .analytics import (
    ConditionalGraph,
    CooccurrenceGraph,
    MappingCoverage,
    PatternTable,
    PrevalenceReport,
    SizeDistribution,
    conditional_probabilities,
    cooccurrence,
    mapping_coverage,
    pattern_frequencies,
    possible_combination_count,
    prevalence,
    size_distribution,
)
from .corpus import (
    Corpus,
    CorpusSummary,
    Incident,
    IngestionReport,
    corpus_summary,
    corpus_to_csv,
    corpus_to_json,
    ingest_corpus,
    loads_corpus_csv,
    loads_corpus_json,
)
from .errors import (
    AmbiguousName,
    DisjointnessViolation,
    DuplicateIncidentId,
    EmptyCorpus,
    InfeasibleSpec,
    InfluenceOpsError,
    InvalidRange,
    NegativeSupport,
    NotFound,
    ParseError,
    PhaseViolation,
    SchemaError,
    UnknownFormat,
    UnknownTechnique,
    ZeroIncidents,
)
from .generate import GeneratorSpec, generate_corpus, load_generator_spec, loads_generator_spec
from .resources import load_bundled_catalog, load_bundled_taxonomy, load_fixture_spec
from .strategies import (
    STRATEGY_ORDER,
    ClassifiedCorpus,
    StrategyCatalog,
    StrategyDefinition,
    StrategyProfile,
    check_disjointness,
    classify_corpus,
    classify_incident,
    load_strategy_catalog,
    loads_strategy_catalog,
)
from .taxonomy import (
    Phase,
    Tactic,
    Taxonomy,
    Technique,
    ValidationReport,
    Violation,
    load_taxonomy,
    loads_taxonomy,
    lookup_technique,
    serialize_taxonomy,
    validate_taxonomy,
)
