"""Publication data model, delimited-text ingestion and unit grouping.

The interchange format is a UTF-8 delimited table (comma by default) with a
mandatory header naming the six columns ``paper_id, unit_id, venue_id,
pub_year, doc_type, citations``. Numbers are plain decimals without
thousands separators. A paper co-authored by several evaluated units appears
once per unit; uniqueness is enforced on the (paper_id, unit_id) pair.
"""

from __future__ import annotations

import csv
import enum
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import DuplicateIdError, RowValidationError, SchemaError

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("paper_id", "unit_id", "venue_id", "pub_year", "doc_type", "citations")

DEFAULT_YEAR_RANGE = (1900, 2100)


class DocType(enum.Enum):
    ARTICLE = "article"
    REVIEW = "review"
    LETTER = "letter"
    OTHER = "other"

    @classmethod
    def parse(cls, raw: str) -> "DocType":
        """Map a document-type string to the enum; unknown strings become
        OTHER with a warning rather than an error (heterogeneous exports)."""
        try:
            return cls(raw.strip().lower())
        except ValueError:
            logger.warning("unknown doc_type %r mapped to 'other'", raw)
            return cls.OTHER


#: Document types that count as citable items in two-year impact factors.
CITABLE_DOC_TYPES = frozenset({DocType.ARTICLE, DocType.REVIEW, DocType.LETTER})


@dataclass(frozen=True)
class PublicationRecord:
    """One paper attributed to one unit of evaluation."""

    paper_id: str
    unit_id: str
    venue_id: str
    pub_year: int
    doc_type: DocType
    citations: int

    def __post_init__(self):
        if not self.paper_id or not self.unit_id or not self.venue_id:
            raise RowValidationError("paper_id, unit_id and venue_id must be non-empty")
        if not isinstance(self.citations, int) or isinstance(self.citations, bool):
            raise RowValidationError(f"citations must be an integer, got {self.citations!r}")
        if self.citations < 0:
            raise RowValidationError(f"citations must be >= 0, got {self.citations}")
        if not isinstance(self.pub_year, int) or isinstance(self.pub_year, bool):
            raise RowValidationError(f"pub_year must be an integer, got {self.pub_year!r}")


@dataclass(frozen=True)
class Corpus:
    """Immutable, validated collection of publication records.

    ``census_year`` is the year in which the citation counts were observed;
    it is only required for indicators that window on it (the two-year
    impact factor).
    """

    records: tuple[PublicationRecord, ...]
    census_year: int | None = None

    def __post_init__(self):
        seen: set[tuple[str, str]] = set()
        for rec in self.records:
            pair = (rec.paper_id, rec.unit_id)
            if pair in seen:
                raise DuplicateIdError(
                    f"duplicate paper_id {rec.paper_id!r} for unit {rec.unit_id!r}"
                )
            seen.add(pair)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[PublicationRecord]:
        return iter(self.records)


def _parse_int(raw: str, column: str, line: int) -> int:
    try:
        return int(raw.strip())
    except (ValueError, AttributeError):
        raise RowValidationError(f"column {column!r} must be an integer, got {raw!r}", line=line)


def load_corpus(
    path: str | Path,
    *,
    delimiter: str = ",",
    census_year: int | None = None,
    year_range: tuple[int, int] = DEFAULT_YEAR_RANGE,
) -> Corpus:
    """Load and validate a publication table.

    Raises SchemaError when a required column is missing, RowValidationError
    (with the offending line number) for bad cell values, DuplicateIdError
    for repeated (paper_id, unit_id) pairs. Row order is preserved.
    """
    path = Path(path)
    records: list[PublicationRecord] = []
    seen: dict[tuple[str, str], int] = {}
    lo_year, hi_year = year_range

    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh, delimiter=delimiter)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, header row required")
        fieldnames = [name.strip() for name in reader.fieldnames]
        missing = [col for col in REQUIRED_COLUMNS if col not in fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing required column(s): {', '.join(missing)}")

        for row in reader:
            line = reader.line_num
            cells = {key.strip(): (val or "").strip() for key, val in row.items() if key}
            for col in REQUIRED_COLUMNS:
                if not cells.get(col):
                    raise RowValidationError(f"column {col!r} is empty", line=line)
            pub_year = _parse_int(cells["pub_year"], "pub_year", line)
            if not lo_year <= pub_year <= hi_year:
                raise RowValidationError(
                    f"pub_year {pub_year} outside plausible range {lo_year}-{hi_year}", line=line
                )
            citations = _parse_int(cells["citations"], "citations", line)
            if citations < 0:
                raise RowValidationError(f"citations must be >= 0, got {citations}", line=line)
            pair = (cells["paper_id"], cells["unit_id"])
            if pair in seen:
                raise DuplicateIdError(
                    f"line {line}: duplicate paper_id {pair[0]!r} for unit {pair[1]!r} "
                    f"(first seen on line {seen[pair]})"
                )
            seen[pair] = line
            records.append(
                PublicationRecord(
                    paper_id=cells["paper_id"],
                    unit_id=cells["unit_id"],
                    venue_id=cells["venue_id"],
                    pub_year=pub_year,
                    doc_type=DocType.parse(cells["doc_type"]),
                    citations=citations,
                )
            )

    return Corpus(records=tuple(records), census_year=census_year)


def corpus_csv_text(corpus: Corpus, *, delimiter: str = ",") -> str:
    """Serialize a corpus to the interchange format (round-trips losslessly
    apart from census_year, which is not a column)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=delimiter, lineterminator="\n")
    writer.writerow(REQUIRED_COLUMNS)
    for rec in corpus.records:
        writer.writerow(
            [
                rec.paper_id,
                rec.unit_id,
                rec.venue_id,
                rec.pub_year,
                rec.doc_type.value,
                rec.citations,
            ]
        )
    return buffer.getvalue()


def save_corpus(corpus: Corpus, path: str | Path, *, delimiter: str = ",") -> None:
    Path(path).write_text(corpus_csv_text(corpus, delimiter=delimiter), encoding="utf-8")


def group_by_unit(corpus: Corpus) -> dict[str, list[PublicationRecord]]:
    """Partition records by unit_id, order of first appearance preserved."""
    groups: dict[str, list[PublicationRecord]] = {}
    for rec in corpus.records:
        groups.setdefault(rec.unit_id, []).append(rec)
    return groups
