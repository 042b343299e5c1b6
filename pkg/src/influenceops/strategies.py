"""Strategy catalog and incident classification.

The catalog materializes seven influence strategies as disjoint technique
pipelines: one execution technique (Execute phase) plus a set of preparation
techniques (Prepare phase). An incident is classified into a strategy exactly
when it carries that strategy's execution technique; preparation techniques
found in the incident are recorded as supporting evidence only. An optional
strict mode additionally requires at least one preparation technique, which
can only ever shrink a profile.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .corpus import Corpus, Incident
from .errors import (
    DisjointnessViolation,
    EmptyCorpus,
    ParseError,
    PhaseViolation,
    SchemaError,
    UnknownTechnique,
)
from .taxonomy import Taxonomy, ValidationReport, Violation

# Canonical display and tie-breaking order of the seven strategies.
STRATEGY_ORDER = ("NR", "NS", "NA", "CNR", "NM", "TD", "IP")


@dataclass(frozen=True)
class StrategyDefinition:
    id: str
    name: str
    execution_technique: str
    preparation_techniques: frozenset[str]
    description: str = ""

    def technique_ids(self) -> frozenset[str]:
        return self.preparation_techniques | {self.execution_technique}


@dataclass(frozen=True)
class StrategyCatalog:
    strategies: tuple[StrategyDefinition, ...]
    taxonomy_version: str

    def __post_init__(self) -> None:
        ids = [s.id for s in self.strategies]
        if len(set(ids)) != len(ids):
            raise SchemaError(f"duplicate strategy ids in catalog: {ids}")

    def by_id(self, strategy_id: str) -> StrategyDefinition:
        for strategy in self.strategies:
            if strategy.id == strategy_id:
                return strategy
        raise KeyError(strategy_id)

    def ids(self) -> tuple[str, ...]:
        return tuple(s.id for s in self.strategies)

    def order_index(self, strategy_id: str) -> int:
        return STRATEGY_ORDER.index(strategy_id)

    def sort_ids(self, strategy_ids) -> tuple[str, ...]:
        """Order a set of strategy ids by the canonical enumeration."""
        return tuple(sorted(strategy_ids, key=STRATEGY_ORDER.index))


@dataclass(frozen=True)
class StrategyProfile:
    """Strategies inferred for one incident, with the matching technique ids."""

    incident_id: str
    strategies: frozenset[str]
    evidence: dict[str, tuple[str, ...]]

    @property
    def mapped(self) -> bool:
        return bool(self.strategies)


@dataclass(frozen=True)
class ClassifiedCorpus:
    corpus: Corpus
    catalog: StrategyCatalog
    profiles: tuple[StrategyProfile, ...]
    strict_prep: bool = False

    @property
    def mapped_profiles(self) -> tuple[StrategyProfile, ...]:
        return tuple(p for p in self.profiles if p.mapped)

    @property
    def unmapped_profiles(self) -> tuple[StrategyProfile, ...]:
        return tuple(p for p in self.profiles if not p.mapped)

    @property
    def mapped_count(self) -> int:
        return sum(1 for p in self.profiles if p.mapped)

    @property
    def total_count(self) -> int:
        return len(self.profiles)


def check_disjointness(catalog: StrategyCatalog) -> ValidationReport:
    """Report every technique shared by two or more strategy pipelines.

    An empty catalog is vacuously disjoint. Each violation names the shared
    technique and all strategies it appears in.
    """
    owners: dict[str, list[str]] = {}
    for strategy in catalog.strategies:
        for technique_id in sorted(strategy.technique_ids()):
            owners.setdefault(technique_id, []).append(strategy.id)

    violations = [
        Violation(
            "shared-technique",
            f"technique {technique_id!r} appears in strategies {', '.join(ids)}",
        )
        for technique_id, ids in sorted(owners.items())
        if len(ids) > 1
    ]
    return ValidationReport(tuple(violations))


def loads_strategy_catalog(text: str, taxonomy: Taxonomy) -> StrategyCatalog:
    """Parse a catalog JSON document and verify it against the taxonomy.

    Raises UnknownTechnique for unresolvable references, PhaseViolation when
    an execution technique is outside the Execute phase or a preparation
    technique outside the Prepare phase, and DisjointnessViolation when a
    technique appears in two pipelines.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"catalog document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("strategies"), list):
        raise SchemaError("catalog document must be an object with a 'strategies' array")
    taxonomy_version = doc.get("taxonomy_version")
    if not isinstance(taxonomy_version, str):
        raise SchemaError("catalog: missing or non-string 'taxonomy_version'")

    strategies: list[StrategyDefinition] = []
    for i, entry in enumerate(doc["strategies"]):
        where = f"strategies[{i}]"
        if not isinstance(entry, dict):
            raise SchemaError(f"{where}: must be an object")
        for key in ("id", "name", "execution_technique"):
            if not isinstance(entry.get(key), str) or not entry.get(key):
                raise SchemaError(f"{where}: missing or empty field {key!r}")
        preps = entry.get("preparation_techniques")
        if not isinstance(preps, list) or not all(isinstance(p, str) for p in preps):
            raise SchemaError(f"{where}: 'preparation_techniques' must be an array of ids")
        strategy_id = entry["id"]
        if strategy_id not in STRATEGY_ORDER:
            raise SchemaError(
                f"{where}: unknown strategy id {strategy_id!r}; "
                f"expected one of {', '.join(STRATEGY_ORDER)}"
            )

        exec_id = entry["execution_technique"]
        if not taxonomy.has_technique(exec_id):
            raise UnknownTechnique(
                f"{where}: execution technique {exec_id!r} not in taxonomy"
            )
        exec_phase = taxonomy.phase_of_technique(exec_id).name
        if exec_phase != "Execute":
            raise PhaseViolation(
                f"strategy {strategy_id}: execution technique {exec_id!r} "
                f"belongs to phase {exec_phase!r}, expected 'Execute'"
            )
        for prep_id in preps:
            if not taxonomy.has_technique(prep_id):
                raise UnknownTechnique(
                    f"{where}: preparation technique {prep_id!r} not in taxonomy"
                )
            prep_phase = taxonomy.phase_of_technique(prep_id).name
            if prep_phase != "Prepare":
                raise PhaseViolation(
                    f"strategy {strategy_id}: preparation technique {prep_id!r} "
                    f"belongs to phase {prep_phase!r}, expected 'Prepare'"
                )

        strategies.append(
            StrategyDefinition(
                id=strategy_id,
                name=entry["name"],
                execution_technique=exec_id,
                preparation_techniques=frozenset(preps),
                description=entry.get("description", ""),
            )
        )

    # Canonical enumeration order regardless of document order.
    strategies.sort(key=lambda s: STRATEGY_ORDER.index(s.id))
    catalog = StrategyCatalog(tuple(strategies), taxonomy_version)
    report = check_disjointness(catalog)
    if not report.ok:
        raise DisjointnessViolation(str(report))
    return catalog


def load_strategy_catalog(path: str | Path, taxonomy: Taxonomy) -> StrategyCatalog:
    return loads_strategy_catalog(Path(path).read_text(encoding="utf-8"), taxonomy)


def classify_incident(
    incident: Incident, catalog: StrategyCatalog, strict_prep: bool = False
) -> StrategyProfile:
    """Infer the incident's strategy set from its technique ids.

    A strategy matches iff its execution technique is present (strict mode
    also demands one of its preparation techniques). Evidence lists the
    execution technique first, then any matched preparation techniques.
    Depends only on the incident's technique set and the catalog.
    """
    matched: list[str] = []
    evidence: dict[str, tuple[str, ...]] = {}
    for strategy in catalog.strategies:
        if strategy.execution_technique not in incident.techniques:
            continue
        preps = sorted(strategy.preparation_techniques & incident.techniques)
        if strict_prep and not preps:
            continue
        matched.append(strategy.id)
        evidence[strategy.id] = (strategy.execution_technique, *preps)
    return StrategyProfile(incident.incident_id, frozenset(matched), evidence)


def classify_corpus(
    corpus: Corpus, catalog: StrategyCatalog, strict_prep: bool = False
) -> ClassifiedCorpus:
    """Classify every incident, preserving corpus order.

    Incidents with at least one strategy are "mapped", the rest "unmapped".
    """
    if not corpus.incidents:
        raise EmptyCorpus("cannot classify an empty corpus")
    profiles = tuple(
        classify_incident(incident, catalog, strict_prep) for incident in corpus.incidents
    )
    return ClassifiedCorpus(corpus, catalog, profiles, strict_prep)
