"""Per-unit impact indicators.

The integrated indicator sums class weights over a unit's percentile scores
(or the raw percentile values under the continuous scheme), so group impact
is the sum of member impacts for fixed reference sets. Classical baselines
(total citations, c/p, two-year impact factor, relative citation rate, mean
normalized citation score) are computed alongside for comparison.

Undefined indicators raise UndefinedIndicatorError; they are never reported
as 0 or NaN, so ill-defined units cannot be silently ranked.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .corpus import CITABLE_DOC_TYPES, Corpus, PublicationRecord
from .errors import ConfigError, DomainError, UndefinedIndicatorError
from .refsets import PercentileScore, ReferenceSets
from .schemes import CONTINUOUS, PR6, RankClassScheme, excellence_scheme

logger = logging.getLogger(__name__)


class Indicator(enum.Enum):
    I3 = "i3"
    PR6 = "pr6"
    EI = "ei"
    TOTAL_CITATIONS = "total_citations"
    CPP = "cpp"
    JIF = "jif"
    RCR = "rcr"
    MNCS = "mncs"


@dataclass(frozen=True)
class IndicatorValue:
    unit_id: str
    indicator: Indicator
    value: float
    n_papers: int
    scheme_name: str | None = None


def _values(scores: Sequence[PercentileScore | float]) -> list[float]:
    return [s.value if isinstance(s, PercentileScore) else float(s) for s in scores]


def classify(score: PercentileScore | float, scheme: RankClassScheme) -> tuple[int, float]:
    """Index and weight of the scheme class containing this percentile."""
    value = score.value if isinstance(score, PercentileScore) else float(score)
    return scheme.classify(value)


def i3(
    scores: Sequence[PercentileScore | float],
    scheme: RankClassScheme = CONTINUOUS,
    unit_id: str = "",
) -> IndicatorValue:
    """Integrated impact: sum over classes of weight x papers in class.

    Under the continuous scheme the value is the plain sum of percentile
    values. Empty input yields 0 with n_papers = 0 (impact of nothing is
    nothing; this keeps the indicator additive).
    """
    values = _values(scores)
    if not values:
        return IndicatorValue(unit_id, Indicator.I3, 0.0, 0, scheme.name)
    if scheme.continuous:
        total = math.fsum(values)
    else:
        counts = kernels.class_counts(values, scheme.lowers)
        total = math.fsum(cls.weight * count for cls, count in zip(scheme.classes, counts))
    return IndicatorValue(unit_id, Indicator.I3, total, len(values), scheme.name)


def pr6(scores: Sequence[PercentileScore | float], unit_id: str = "") -> IndicatorValue:
    """Six-rank-class aggregation (weights 1..6 from bottom-50% to top-1%)."""
    base = i3(scores, PR6, unit_id)
    return IndicatorValue(unit_id, Indicator.PR6, base.value, base.n_papers, PR6.name)


def excellence_indicator(
    scores: Sequence[PercentileScore | float],
    top_percent: float = 10.0,
    unit_id: str = "",
) -> IndicatorValue:
    """Number of papers in the top-x% of their reference sets.

    Identical by construction to the integrated indicator under the
    two-class 0/1 scheme.
    """
    scheme = excellence_scheme(top_percent)  # validates 0 < x < 100
    base = i3(scores, scheme, unit_id)
    return IndicatorValue(unit_id, Indicator.EI, base.value, base.n_papers, scheme.name)


def total_citations(records: Sequence[PublicationRecord], unit_id: str = "") -> IndicatorValue:
    value = float(sum(r.citations for r in records))
    return IndicatorValue(unit_id, Indicator.TOTAL_CITATIONS, value, len(records))


def cpp(records: Sequence[PublicationRecord], unit_id: str = "") -> IndicatorValue:
    """Mean citations per publication, kept at full precision."""
    if not records:
        raise UndefinedIndicatorError(f"c/p undefined for empty unit {unit_id!r}")
    value = sum(r.citations for r in records) / len(records)
    return IndicatorValue(unit_id, Indicator.CPP, value, len(records))


def jif(corpus: Corpus, venue_id: str, census_year: int) -> IndicatorValue:
    """Two-year impact factor: citations counted in the census year to the
    venue's citable items (articles, reviews, letters) published in the two
    preceding years, divided by the number of those items."""
    if corpus.census_year is None:
        raise ConfigError("corpus has no census_year; pass one at load time to compute JIF")
    if corpus.census_year != census_year:
        raise ConfigError(
            f"corpus census_year {corpus.census_year} does not match requested {census_year}"
        )
    window = (census_year - 2, census_year - 1)
    items = [
        r
        for r in corpus.records
        if r.venue_id == venue_id and r.pub_year in window and r.doc_type in CITABLE_DOC_TYPES
    ]
    if not items:
        raise UndefinedIndicatorError(
            f"JIF undefined for venue {venue_id!r}: no citable items published in {window}"
        )
    value = sum(r.citations for r in items) / len(items)
    return IndicatorValue(venue_id, Indicator.JIF, value, len(items))


def rcr(
    records: Sequence[PublicationRecord],
    refsets: ReferenceSets,
    unit_id: str = "",
) -> IndicatorValue:
    """Relative citation rate: mean observed citation rate over mean
    expected citation rate, the expectation being each paper's
    reference-set mean (same document type and publication year)."""
    if not records:
        raise UndefinedIndicatorError(f"RCR undefined for empty unit {unit_id!r}")
    expected = []
    for rec in records:
        key = refsets.key_for(rec)
        if key is None:
            raise DomainError(
                f"record {rec.paper_id!r} of unit {unit_id!r} belongs to no reference set"
            )
        expected.append(refsets.mean_citations(key))
    mocr = sum(r.citations for r in records) / len(records)
    mecr = math.fsum(expected) / len(expected)
    if mecr == 0.0:
        raise UndefinedIndicatorError(
            f"RCR undefined for unit {unit_id!r}: mean expected citation rate is 0"
        )
    return IndicatorValue(unit_id, Indicator.RCR, mocr / mecr, len(records))


def mncs(
    records: Sequence[PublicationRecord],
    refsets: ReferenceSets,
    unit_id: str = "",
) -> IndicatorValue:
    """Mean normalized citation score: divide each paper's citations by its
    reference-set mean first, then average the quotients.

    Papers whose reference set has mean 0 are excluded with a warning (their
    quotient is undefined); the indicator errors only when nothing is left.
    """
    if not records:
        raise UndefinedIndicatorError(f"MNCS undefined for empty unit {unit_id!r}")
    ratios = []
    excluded = 0
    for rec in records:
        key = refsets.key_for(rec)
        if key is None:
            raise DomainError(
                f"record {rec.paper_id!r} of unit {unit_id!r} belongs to no reference set"
            )
        mean = refsets.mean_citations(key)
        if mean == 0.0:
            excluded += 1
            continue
        ratios.append(rec.citations / mean)
    if excluded:
        logger.warning(
            "MNCS for unit %r: %d paper(s) excluded, reference-set mean is 0", unit_id, excluded
        )
    if not ratios:
        raise UndefinedIndicatorError(
            f"MNCS undefined for unit {unit_id!r}: all reference-set means are 0"
        )
    return IndicatorValue(unit_id, Indicator.MNCS, math.fsum(ratios) / len(ratios), len(ratios))
