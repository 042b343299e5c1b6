"""Incident corpora: ingestion, validation, serialization, and summaries.

Two on-disk forms are supported and round-trip losslessly:

* CSV with header ``incident_id,title,year,targets,techniques`` where
  ``targets`` and ``techniques`` are ``|``-separated inside one RFC 4180
  quoted field.
* JSON: an array of incident objects mirroring the same fields.

Technique ids are resolved against a taxonomy at ingestion. In strict mode
any unknown id aborts the whole ingest; in lenient mode unknown ids are
dropped per incident and reported, because hand-tagged datasets contain
typos. A resulting Corpus is immutable and shareable across workers.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DuplicateIncidentId, EmptyCorpus, ParseError, UnknownTechnique
from .taxonomy import Taxonomy

CSV_HEADER = ("incident_id", "title", "year", "targets", "techniques")


@dataclass(frozen=True)
class Incident:
    incident_id: str
    title: str
    year: int
    targets: tuple[str, ...] = ()
    techniques: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Corpus:
    incidents: tuple[Incident, ...]
    source: str = ""

    def __len__(self) -> int:
        return len(self.incidents)


@dataclass(frozen=True)
class DroppedTechnique:
    incident_id: str
    technique_id: str


@dataclass(frozen=True)
class IngestionReport:
    mode: str
    dropped: tuple[DroppedTechnique, ...] = ()

    def warnings(self) -> tuple[str, ...]:
        return tuple(
            f"incident {d.incident_id!r}: dropped unknown technique {d.technique_id!r}"
            for d in self.dropped
        )


@dataclass(frozen=True)
class CorpusSummary:
    incident_count: int
    year_min: int
    year_max: int
    technique_counts: tuple[tuple[str, int], ...]


def _split_multi(value: str) -> list[str]:
    return [part for part in value.split("|") if part]


def _build_corpus(
    rows: list[tuple[str, str, int, list[str], list[str]]],
    taxonomy: Taxonomy,
    mode: str,
    source: str,
) -> tuple[Corpus, IngestionReport]:
    if mode not in ("strict", "lenient"):
        raise ValueError(f"mode must be 'strict' or 'lenient', got {mode!r}")
    if not rows:
        raise EmptyCorpus(f"{source}: corpus document contains no incidents")

    seen_ids: set[str] = set()
    dropped: list[DroppedTechnique] = []
    incidents: list[Incident] = []
    for n, (incident_id, title, year, targets, technique_ids) in enumerate(rows, start=1):
        if incident_id in seen_ids:
            raise DuplicateIncidentId(f"{source}: duplicate incident_id {incident_id!r}")
        seen_ids.add(incident_id)

        kept: list[str] = []
        for technique_id in technique_ids:
            if taxonomy.has_technique(technique_id):
                kept.append(technique_id)
            elif mode == "strict":
                raise UnknownTechnique(
                    f"{source}: incident {n} ({incident_id!r}) references "
                    f"unknown technique {technique_id!r}"
                )
            else:
                dropped.append(DroppedTechnique(incident_id, technique_id))

        incidents.append(
            Incident(incident_id, title, year, tuple(targets), frozenset(kept))
        )

    return Corpus(tuple(incidents), source), IngestionReport(mode, tuple(dropped))


def loads_corpus_csv(
    text: str, taxonomy: Taxonomy, mode: str = "strict", source: str = "<csv>"
) -> tuple[Corpus, IngestionReport]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyCorpus(f"{source}: empty CSV document") from None
    if tuple(header) != CSV_HEADER:
        raise ParseError(
            f"{source}: bad CSV header {header!r}, expected {','.join(CSV_HEADER)}"
        )

    rows = []
    for n, row in enumerate(reader, start=1):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"{source}: row {n}: expected {len(CSV_HEADER)} fields, got {len(row)}")
        incident_id, title, year_text, targets_text, techniques_text = row
        if not incident_id:
            raise ParseError(f"{source}: row {n}: empty incident_id")
        try:
            year = int(year_text)
        except ValueError:
            raise ParseError(f"{source}: row {n}: year {year_text!r} is not an integer") from None
        rows.append(
            (incident_id, title, year, _split_multi(targets_text), _split_multi(techniques_text))
        )
    return _build_corpus(rows, taxonomy, mode, source)


def loads_corpus_json(
    text: str, taxonomy: Taxonomy, mode: str = "strict", source: str = "<json>"
) -> tuple[Corpus, IngestionReport]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: corpus document is not valid JSON: {exc}") from exc
    if not isinstance(doc, list):
        raise ParseError(f"{source}: corpus JSON must be an array of incident objects")

    rows = []
    for n, entry in enumerate(doc, start=1):
        if not isinstance(entry, dict):
            raise ParseError(f"{source}: incident {n}: must be an object")
        incident_id = entry.get("incident_id")
        if not isinstance(incident_id, str) or not incident_id:
            raise ParseError(f"{source}: incident {n}: missing or empty 'incident_id'")
        title = entry.get("title", "")
        if not isinstance(title, str):
            raise ParseError(f"{source}: incident {n}: 'title' must be a string")
        year = entry.get("year")
        if not isinstance(year, int) or isinstance(year, bool):
            raise ParseError(f"{source}: incident {n}: 'year' must be an integer")
        targets = entry.get("targets", [])
        techniques = entry.get("techniques", [])
        for key, value in (("targets", targets), ("techniques", techniques)):
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ParseError(f"{source}: incident {n}: {key!r} must be an array of strings")
        rows.append((incident_id, title, year, list(targets), list(techniques)))
    return _build_corpus(rows, taxonomy, mode, source)


def ingest_corpus(
    path: str | Path, taxonomy: Taxonomy, mode: str = "strict"
) -> tuple[Corpus, IngestionReport]:
    """Load a corpus from a .csv or .json file, detected by extension."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        return loads_corpus_json(text, taxonomy, mode, source=str(path))
    return loads_corpus_csv(text, taxonomy, mode, source=str(path))


def corpus_to_csv(corpus: Corpus) -> str:
    """Serialize with sorted technique ids and LF line endings (byte-stable)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for incident in corpus.incidents:
        writer.writerow(
            [
                incident.incident_id,
                incident.title,
                incident.year,
                "|".join(incident.targets),
                "|".join(sorted(incident.techniques)),
            ]
        )
    return out.getvalue()


def corpus_to_json(corpus: Corpus) -> str:
    doc = [
        {
            "incident_id": incident.incident_id,
            "title": incident.title,
            "year": incident.year,
            "targets": list(incident.targets),
            "techniques": sorted(incident.techniques),
        }
        for incident in corpus.incidents
    ]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def corpus_summary(corpus: Corpus) -> CorpusSummary:
    """Incident count, year range, and technique frequencies (count desc, id asc)."""
    if not corpus.incidents:
        raise EmptyCorpus("cannot summarize an empty corpus")
    counts: Counter[str] = Counter()
    for incident in corpus.incidents:
        counts.update(incident.techniques)
    ordered = tuple(sorted(counts.items(), key=lambda item: (-item[1], item[0])))
    years = [incident.year for incident in corpus.incidents]
    return CorpusSummary(len(corpus.incidents), min(years), max(years), ordered)
