"""Reference-set construction and percentile scoring.

A paper is ranked within its reference set: the population of papers with
the same venue scope, publication year and (by default) document type. A
scope is either the paper's own venue or a named set of venues configured in
a JSON file, e.g.::

    {"multidisciplinary": ["J_NATURE", "J_SCIENCE", "J_PNAS"]}

Records whose venue falls outside every configured scope are discarded (and
reported), never silently dropped.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import kernels
from .corpus import Corpus, PublicationRecord
from .errors import ConfigError, DomainError
from .kernels import COUNTING_RULES

logger = logging.getLogger(__name__)

DEFAULT_RULE = "mid"

#: Reference sets smaller than this are allowed but flagged: top-percentile
#: classes are unattainable in tiny populations.
SMALL_REFSET_WARNING = 20


@dataclass(frozen=True, order=True)
class ReferenceSetKey:
    """Identity of one comparison population."""

    scope: str
    pub_year: int
    doc_type: str | None  # None when document-type control is off


@dataclass(frozen=True)
class PercentileScore:
    """A paper's percentile value within its reference set."""

    paper_id: str
    unit_id: str
    value: float
    rule: str
    refset_size: int
    refset_key: ReferenceSetKey | None = None

    def __post_init__(self):
        if not 0.0 <= self.value <= 100.0:
            raise DomainError(f"percentile value {self.value} outside [0, 100]")


class ScopeConfig:
    """Maps venue ids to scope names.

    Without named sets every venue is its own scope. With named sets a venue
    resolves to the unique set containing it; venues in no set are discarded.
    """

    def __init__(self, named_sets: Mapping[str, Iterable[str]] | None = None):
        if named_sets is None:
            self.named_sets: dict[str, frozenset[str]] | None = None
            self._venue_to_scope: dict[str, str] = {}
            return
        named_sets = dict(named_sets)
        if not named_sets:
            raise ConfigError("scope configuration is empty")
        venue_to_scope: dict[str, str] = {}
        clean: dict[str, frozenset[str]] = {}
        for name, venues in named_sets.items():
            venues = frozenset(str(v) for v in venues)
            if not venues:
                raise ConfigError(f"scope {name!r} lists no venues")
            for venue in venues:
                if venue in venue_to_scope:
                    raise ConfigError(
                        f"venue {venue!r} appears in scopes {venue_to_scope[venue]!r} "
                        f"and {name!r}; scopes must not overlap"
                    )
                venue_to_scope[venue] = name
            clean[name] = venues
        self.named_sets = clean
        self._venue_to_scope = venue_to_scope

    @classmethod
    def self_scoped(cls) -> "ScopeConfig":
        return cls(None)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScopeConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict) or not all(isinstance(v, list) for v in data.values()):
            raise ConfigError(f"{path}: expected an object mapping scope names to venue lists")
        return cls(data)

    def scope_of(self, venue_id: str) -> str | None:
        """Scope name for a venue, or None when the venue is out of scope."""
        if self.named_sets is None:
            return venue_id
        return self._venue_to_scope.get(venue_id)


class ReferenceSets:
    """Partition of a corpus into reference sets plus the discard bin."""

    def __init__(
        self,
        sets: Mapping[ReferenceSetKey, Sequence[PublicationRecord]],
        discarded: Sequence[PublicationRecord],
        doc_type_control: bool,
    ):
        self.sets: dict[ReferenceSetKey, tuple[PublicationRecord, ...]] = {
            key: tuple(sets[key]) for key in sorted(sets, key=_key_sort)
        }
        self.discarded: tuple[PublicationRecord, ...] = tuple(discarded)
        self.doc_type_control = doc_type_control
        self._key_by_record: dict[tuple[str, str], ReferenceSetKey] = {}
        for key, records in self.sets.items():
            for rec in records:
                self._key_by_record[(rec.paper_id, rec.unit_id)] = key
        self._mean_cache: dict[ReferenceSetKey, float] = {}

    def key_for(self, record: PublicationRecord) -> ReferenceSetKey | None:
        return self._key_by_record.get((record.paper_id, record.unit_id))

    def records_of(self, key: ReferenceSetKey) -> tuple[PublicationRecord, ...]:
        return self.sets[key]

    def mean_citations(self, key: ReferenceSetKey) -> float:
        """Mean citation count of one reference set (the expected rate used
        by quotient-style baselines)."""
        if key not in self._mean_cache:
            records = self.sets[key]
            self._mean_cache[key] = sum(r.citations for r in records) / len(records)
        return self._mean_cache[key]

    def __len__(self) -> int:
        return len(self.sets)


def _key_sort(key: ReferenceSetKey):
    return (key.scope, key.pub_year, key.doc_type or "")


def build_reference_sets(
    corpus: Corpus,
    scope_config: ScopeConfig | None = None,
    *,
    doc_type_control: bool = True,
    warn_below: int = SMALL_REFSET_WARNING,
) -> ReferenceSets:
    """Assign every record to exactly one reference set.

    Sets are keyed by (scope, pub_year, doc_type); switching
    ``doc_type_control`` off pools document types within (scope, pub_year).
    """
    scope_config = scope_config or ScopeConfig.self_scoped()
    sets: dict[ReferenceSetKey, list[PublicationRecord]] = {}
    discarded: list[PublicationRecord] = []
    for rec in corpus.records:
        scope = scope_config.scope_of(rec.venue_id)
        if scope is None:
            discarded.append(rec)
            continue
        key = ReferenceSetKey(
            scope=scope,
            pub_year=rec.pub_year,
            doc_type=rec.doc_type.value if doc_type_control else None,
        )
        sets.setdefault(key, []).append(rec)

    if discarded:
        logger.warning(
            "%d record(s) fall outside every configured venue scope and were discarded",
            len(discarded),
        )
    for key, records in sets.items():
        if len(records) < warn_below:
            logger.warning(
                "reference set %s has only %d record(s); top-percentile classes "
                "are unreliable below %d",
                key,
                len(records),
                warn_below,
            )
    return ReferenceSets(sets, discarded, doc_type_control)


def percentile_scores(
    records: Sequence[PublicationRecord],
    rule: str = DEFAULT_RULE,
    key: ReferenceSetKey | None = None,
) -> list[PercentileScore]:
    """Percentile score of every record within this reference set.

    For a paper with citation count c in a set of size N, with L papers
    strictly below c and T papers tied at c (itself included):

        strict -> 100*L/N       weak -> 100*(L+T)/N     mid -> 100*(L+T/2)/N

    Tied counts always receive equal values. Values are kept at full double
    precision; nothing is rounded before reporting.
    """
    if not records:
        raise DomainError("cannot compute percentiles for an empty reference set")
    if rule not in COUNTING_RULES:
        raise ConfigError(f"unknown counting rule {rule!r}; pick one of {COUNTING_RULES}")
    values = kernels.percentile_values([r.citations for r in records], rule)
    n = len(records)
    return [
        PercentileScore(
            paper_id=rec.paper_id,
            unit_id=rec.unit_id,
            value=value,
            rule=rule,
            refset_size=n,
            refset_key=key,
        )
        for rec, value in zip(records, values)
    ]


@dataclass
class UnitScores:
    """Per-unit percentile scores, each unit sorted by descending value."""

    by_unit: dict[str, list[PercentileScore]]
    excluded: dict[str, int]  # records discarded per unit (out-of-scope venue)
    rule: str


def unit_percentiles(
    corpus: Corpus,
    scope_config: ScopeConfig | None = None,
    rule: str = DEFAULT_RULE,
    *,
    doc_type_control: bool = True,
    threads: int | None = None,
    refsets: ReferenceSets | None = None,
) -> UnitScores:
    """Score every record in its own reference set, grouped by unit.

    Reference sets are independent, so they may be scored in parallel;
    results are merged in sorted key order, making the output identical for
    any thread count. Pass a prebuilt ``refsets`` to skip repartitioning.
    """
    if refsets is None:
        refsets = build_reference_sets(corpus, scope_config, doc_type_control=doc_type_control)
    keys = list(refsets.sets)

    if threads and threads > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {
                key: pool.submit(percentile_scores, refsets.sets[key], rule, key) for key in keys
            }
            per_key = {key: futures[key].result() for key in keys}
    else:
        per_key = {key: percentile_scores(refsets.sets[key], rule, key) for key in keys}

    by_unit: dict[str, list[PercentileScore]] = {}
    for rec in corpus.records:  # unit order follows first appearance
        by_unit.setdefault(rec.unit_id, [])
    for key in keys:
        for score in per_key[key]:
            by_unit[score.unit_id].append(score)
    for unit, scores in by_unit.items():
        scores.sort(key=lambda s: (-s.value, s.paper_id))

    excluded: dict[str, int] = {}
    for rec in refsets.discarded:
        excluded[rec.unit_id] = excluded.get(rec.unit_id, 0) + 1
        logger.warning(
            "record %s of unit %s excluded: venue %r not in any scope",
            rec.paper_id,
            rec.unit_id,
            rec.venue_id,
        )
    return UnitScores(by_unit=by_unit, excluded=excluded, rule=rule)


def export_scores_csv(scores: Iterable[PercentileScore]) -> str:
    """Per-paper percentile table (paper, unit, reference-set key, value)."""
    lines = ["paper_id,unit_id,scope,pub_year,doc_type,refset_size,value,rule"]
    for s in scores:
        key = s.refset_key
        scope = key.scope if key else ""
        year = key.pub_year if key else ""
        doc_type = (key.doc_type or "") if key else ""
        lines.append(
            f"{s.paper_id},{s.unit_id},{scope},{year},{doc_type},{s.refset_size},"
            f"{s.value!r},{s.rule}"
        )
    return "\n".join(lines) + "\n"
