"""Corpus statistics over classified incidents.

Every statistic is computed with exact integer arithmetic; ratios are
`fractions.Fraction` values. Decimal rendering happens only at the report
layer. All functions are pure over an immutable ClassifiedCorpus, and all
sorted outputs break ties by the canonical strategy enumeration order, so
results are independent of incident order and stable across runs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import EmptyCorpus, InvalidRange, NegativeSupport
from .strategies import ClassifiedCorpus, StrategyCatalog


@dataclass(frozen=True)
class PrevalenceEntry:
    strategy_id: str
    name: str
    count: int
    fraction: Fraction


@dataclass(frozen=True)
class PrevalenceReport:
    entries: tuple[PrevalenceEntry, ...]
    denominator: int

    def count(self, strategy_id: str) -> int:
        for entry in self.entries:
            if entry.strategy_id == strategy_id:
                return entry.count
        raise KeyError(strategy_id)

    def fraction(self, strategy_id: str) -> Fraction:
        return Fraction(self.count(strategy_id), self.denominator)


@dataclass(frozen=True)
class SizeDistribution:
    counts: dict[int, int]
    mapped_total: int
    multi_total: int

    @property
    def multi_fraction_of_all(self) -> Fraction:
        return Fraction(self.multi_total, self.mapped_total)

    def fraction_of_all(self, size: int) -> Fraction:
        return Fraction(self.counts.get(size, 0), self.mapped_total)

    def fraction_of_multi(self, size: int) -> Fraction:
        if self.multi_total == 0:
            return Fraction(0)
        return Fraction(self.counts.get(size, 0), self.multi_total)


@dataclass(frozen=True)
class PatternRow:
    strategies: tuple[str, ...]
    exact_count: int
    containment_count: int


@dataclass(frozen=True)
class PatternTable:
    rows: tuple[PatternRow, ...]

    @property
    def distinct_pattern_count(self) -> int:
        return len(self.rows)

    def row(self, strategies) -> PatternRow:
        wanted = frozenset(strategies)
        for row in self.rows:
            if frozenset(row.strategies) == wanted:
                return row
        raise KeyError(sorted(wanted))

    def exact_count(self, strategies) -> int:
        try:
            return self.row(strategies).exact_count
        except KeyError:
            return 0

    def containment_count(self, strategies) -> int:
        try:
            return self.row(strategies).containment_count
        except KeyError:
            wanted = frozenset(strategies)
            return sum(
                row.exact_count for row in self.rows if wanted <= frozenset(row.strategies)
            )


@dataclass(frozen=True)
class CooccurrenceNode:
    strategy_id: str
    name: str
    count: int


@dataclass(frozen=True)
class CooccurrenceEdge:
    a: str
    b: str
    weight: int


@dataclass(frozen=True)
class CooccurrenceGraph:
    nodes: tuple[CooccurrenceNode, ...]
    edges: tuple[CooccurrenceEdge, ...]

    def node_weight(self, strategy_id: str) -> int:
        for node in self.nodes:
            if node.strategy_id == strategy_id:
                return node.count
        raise KeyError(strategy_id)

    def edge_weight(self, a: str, b: str) -> int:
        wanted = frozenset((a, b))
        for edge in self.edges:
            if frozenset((edge.a, edge.b)) == wanted:
                return edge.weight
        return 0


@dataclass(frozen=True)
class ConditionalEdge:
    """Directed edge source -> target: P(target | source) as an exact pair."""

    source: str
    target: str
    joint_count: int
    source_count: int

    @property
    def probability(self) -> Fraction:
        return Fraction(self.joint_count, self.source_count)


@dataclass(frozen=True)
class ConditionalGraph:
    nodes: tuple[CooccurrenceNode, ...]
    edges: tuple[ConditionalEdge, ...]
    min_support: int

    def probability(self, source: str, target: str) -> Fraction:
        """P(target | source), defined for any pair including source==target."""
        source_count = next(n.count for n in self.nodes if n.strategy_id == source)
        if source_count == 0:
            raise ZeroDivisionError(f"strategy {source!r} occurs in no mapped incident")
        if source == target:
            return Fraction(1)
        for edge in self.edges:
            if edge.source == source and edge.target == target:
                return edge.probability
        raise KeyError((source, target))


@dataclass(frozen=True)
class MappingCoverage:
    mapped: int
    total: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.mapped, self.total)


def _mapped_profiles(cc: ClassifiedCorpus):
    mapped = cc.mapped_profiles
    if not mapped:
        raise EmptyCorpus("no mapped incidents: statistics are undefined")
    return mapped


def _strategy_counts(cc: ClassifiedCorpus) -> dict[str, int]:
    counts = {s.id: 0 for s in cc.catalog.strategies}
    for profile in cc.profiles:
        for strategy_id in profile.strategies:
            counts[strategy_id] += 1
    return counts


def prevalence(cc: ClassifiedCorpus) -> PrevalenceReport:
    """Per-strategy incident counts over mapped incidents only.

    Entries are sorted by count descending, ties by enumeration order.
    """
    mapped = _mapped_profiles(cc)
    counts = _strategy_counts(cc)
    denominator = len(mapped)
    entries = tuple(
        PrevalenceEntry(s.id, s.name, counts[s.id], Fraction(counts[s.id], denominator))
        for s in sorted(
            cc.catalog.strategies,
            key=lambda s: (-counts[s.id], cc.catalog.order_index(s.id)),
        )
    )
    return PrevalenceReport(entries, denominator)


def size_distribution(cc: ClassifiedCorpus) -> SizeDistribution:
    """How many mapped incidents combine k strategies, for each k >= 1."""
    mapped = _mapped_profiles(cc)
    counts = Counter(len(p.strategies) for p in mapped)
    multi = sum(c for size, c in counts.items() if size >= 2)
    return SizeDistribution(dict(sorted(counts.items())), len(mapped), multi)


def pattern_frequencies(cc: ClassifiedCorpus) -> PatternTable:
    """Distinct strategy sets with exact-match and superset (containment) counts.

    Rows are sorted by exact count descending, then pattern size ascending,
    then enumeration order of the member ids.
    """
    mapped = _mapped_profiles(cc)
    exact: Counter[frozenset[str]] = Counter(p.strategies for p in mapped)
    order = cc.catalog.order_index

    rows = []
    for pattern, count in exact.items():
        containment = sum(1 for p in mapped if pattern <= p.strategies)
        rows.append(
            PatternRow(cc.catalog.sort_ids(pattern), count, containment)
        )
    rows.sort(key=lambda r: (-r.exact_count, len(r.strategies), tuple(order(s) for s in r.strategies)))
    return PatternTable(tuple(rows))


def _nodes(cc: ClassifiedCorpus, counts: dict[str, int]) -> tuple[CooccurrenceNode, ...]:
    return tuple(
        CooccurrenceNode(s.id, s.name, counts[s.id]) for s in cc.catalog.strategies
    )


def cooccurrence(cc: ClassifiedCorpus) -> CooccurrenceGraph:
    """Undirected strategy graph weighted by joint incident counts.

    Node weight is the strategy's mapped-incident count; zero-weight edges
    are omitted. Emission order follows the strategy enumeration.
    """
    mapped = _mapped_profiles(cc)
    counts = _strategy_counts(cc)
    ids = cc.catalog.ids()

    joint: Counter[tuple[str, str]] = Counter()
    for profile in mapped:
        present = cc.catalog.sort_ids(profile.strategies)
        for a, b in combinations(present, 2):
            joint[(a, b)] += 1

    edges = tuple(
        CooccurrenceEdge(a, b, joint[(a, b)])
        for a, b in combinations(ids, 2)
        if joint[(a, b)] > 0
    )
    return CooccurrenceGraph(_nodes(cc, counts), edges)


def conditional_probabilities(cc: ClassifiedCorpus, min_support: int = 1) -> ConditionalGraph:
    """Directed graph of P(target | source) = joint / source count.

    An edge source->target (source != target) is present iff the source
    strategy's incident count reaches max(min_support, 1); weights are exact
    rationals carried as integer pairs.
    """
    if min_support < 0:
        raise NegativeSupport(f"min_support must be >= 0, got {min_support}")
    mapped = _mapped_profiles(cc)
    counts = _strategy_counts(cc)
    ids = cc.catalog.ids()
    threshold = max(min_support, 1)

    joint: Counter[tuple[str, str]] = Counter()
    for profile in mapped:
        present = cc.catalog.sort_ids(profile.strategies)
        for a, b in combinations(present, 2):
            joint[(a, b)] += 1
            joint[(b, a)] += 1

    edges = tuple(
        ConditionalEdge(source, target, joint[(source, target)], counts[source])
        for source in ids
        for target in ids
        if source != target and counts[source] >= threshold
    )
    return ConditionalGraph(_nodes(cc, counts), edges, min_support)


def possible_combination_count(n_strategies: int, min_size: int) -> int:
    """Number of strategy subsets with at least min_size members."""
    if n_strategies < 0 or min_size < 0 or min_size > n_strategies:
        raise InvalidRange(
            f"require 0 <= min_size <= n_strategies, got ({n_strategies}, {min_size})"
        )
    return sum(comb(n_strategies, k) for k in range(min_size, n_strategies + 1))


def mapping_coverage(cc: ClassifiedCorpus) -> MappingCoverage:
    """Mapped over total incidents as an exact rational with both integers."""
    if not cc.profiles:
        raise EmptyCorpus("empty corpus has no coverage")
    return MappingCoverage(cc.mapped_count, cc.total_count)
