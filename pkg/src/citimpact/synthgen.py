"""Seeded generator for synthetic, heavily skewed citation corpora.

Citation and publication counts in real databases are heavily skewed, so
the generator offers a discrete power law and a lognormal besides the
constant distribution used in tests. Randomness comes from splitmix64, a
small, widely documented 64-bit PRNG with fixed constants, so the same
seed produces byte-identical corpora in any implementation of the
algorithm (see README for the constants and the derivation of doubles).
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus, DocType, PublicationRecord
from .errors import ConfigError, DomainError
from .indicators import cpp, i3
from .refsets import build_reference_sets, unit_percentiles
from .schemes import CONTINUOUS, RankClassScheme

_MASK64 = (1 << 64) - 1

DISTRIBUTIONS = ("constant", "lognormal", "power-law")


class SplitMix64:
    """splitmix64 PRNG (Steele, Lea, Flood 2014; the Java 8 SplittableRandom
    mixer). State advances by the golden-gamma constant; output is mixed
    with two multiply-xorshift rounds. Doubles take the top 53 bits."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def randint(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]. Modulo reduction; the bias is
        immaterial for synthetic corpora and keeps the stream portable."""
        if high < low:
            raise ConfigError(f"empty integer range [{low}, {high}]")
        return low + self.next_u64() % (high - low + 1)

    def normal(self) -> float:
        """Standard normal via Box-Muller; one variate per pair of uniforms
        (the sine branch is discarded to keep the stream position simple)."""
        u1 = self.random()
        while u1 == 0.0:
            u1 = self.random()
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters of a synthetic corpus.

    ``papers_per_unit`` and ``years`` are inclusive integer ranges;
    ``doc_type_mix`` maps document types to sampling weights. Distribution
    parameters: ``value`` for constant, ``mu``/``sigma`` for lognormal,
    ``alpha``/``c_min`` for the power law (continuous Pareto draws rounded
    to non-negative integers).
    """

    seed: int
    n_units: int
    papers_per_unit: tuple[int, int]
    distribution: str = "power-law"
    value: int = 0
    mu: float = 1.0
    sigma: float = 1.2
    alpha: float = 2.5
    c_min: float = 1.0
    n_venues: int = 1
    years: tuple[int, int] = (2004, 2004)
    doc_type_mix: Mapping[str, float] = dataclasses.field(
        default_factory=lambda: {"article": 1.0}
    )

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise ConfigError(
                f"unknown distribution {self.distribution!r}; expected one of {DISTRIBUTIONS}"
            )
        if self.n_units < 1:
            raise ConfigError(f"n_units must be >= 1, got {self.n_units}")
        low, high = self.papers_per_unit
        if low < 0 or high < low:
            raise ConfigError(f"invalid papers_per_unit range [{low}, {high}]")
        if self.n_venues < 1:
            raise ConfigError(f"n_venues must be >= 1, got {self.n_venues}")
        if self.years[1] < self.years[0]:
            raise ConfigError(f"invalid year range {self.years}")
        if self.distribution == "constant" and self.value < 0:
            raise ConfigError(f"constant citation value must be >= 0, got {self.value}")
        if self.distribution == "lognormal" and self.sigma < 0:
            raise ConfigError(f"sigma must be >= 0, got {self.sigma}")
        if self.distribution == "power-law":
            if self.alpha <= 1.0:
                raise ConfigError(f"power-law alpha must be > 1, got {self.alpha}")
            if self.c_min <= 0.0:
                raise ConfigError(f"power-law c_min must be > 0, got {self.c_min}")
        if not self.doc_type_mix:
            raise ConfigError("doc_type_mix must not be empty")
        known = {dt.value for dt in DocType}
        for name, weight in self.doc_type_mix.items():
            if name not in known:
                raise ConfigError(f"unknown doc_type {name!r} in mix; expected one of {sorted(known)}")
            if weight < 0:
                raise ConfigError(f"doc_type weight must be >= 0, got {name}={weight}")
        if sum(self.doc_type_mix.values()) <= 0:
            raise ConfigError("doc_type_mix weights must sum to a positive value")

    @classmethod
    def from_file(cls, path: str | Path) -> "GeneratorSpec":
        """Load a spec from a JSON object with the dataclass's field names
        (ranges as two-element lists)."""
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read generator spec {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"generator spec {path} must be a JSON object")
        known_fields = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - known_fields)
        if unknown:
            raise ConfigError(f"unknown generator spec keys: {', '.join(unknown)}")
        for key in ("papers_per_unit", "years"):
            if key in raw:
                if not (isinstance(raw[key], list) and len(raw[key]) == 2):
                    raise ConfigError(f"{key} must be a two-element [low, high] list")
                raw[key] = (int(raw[key][0]), int(raw[key][1]))
        try:
            return cls(**raw)
        except TypeError as exc:
            raise ConfigError(f"invalid generator spec {path}: {exc}") from exc


def _draw_citations(rng: SplitMix64, spec: GeneratorSpec) -> int:
    if spec.distribution == "constant":
        return spec.value
    if spec.distribution == "lognormal":
        x = math.exp(spec.mu + spec.sigma * rng.normal())
    else:  # power-law: inverse CDF of a Pareto with density ~ x^-alpha
        u = rng.random()
        x = spec.c_min * (1.0 - u) ** (-1.0 / (spec.alpha - 1.0))
    return max(0, round(x))


def _weighted_choice(rng: SplitMix64, items: Sequence[str], weights: Sequence[float]) -> str:
    total = math.fsum(weights)
    r = rng.random() * total
    acc = 0.0
    for item, weight in zip(items, weights):
        acc += weight
        if r < acc:
            return item
    return items[-1]  # guard for r landing on the cumulative total


def generate(spec: GeneratorSpec, *, census_year: int | None = None) -> Corpus:
    """Draw a corpus from the spec; pure function of the seed.

    Papers get globally unique ids, venues and years are uniform, and
    citation counts are i.i.d. from the configured distribution.
    """
    rng = SplitMix64(spec.seed)
    unit_width = max(2, len(str(spec.n_units)))
    venue_width = max(2, len(str(spec.n_venues)))
    venues = [f"V{i + 1:0{venue_width}d}" for i in range(spec.n_venues)]
    mix_items = list(spec.doc_type_mix)
    mix_weights = [spec.doc_type_mix[k] for k in mix_items]

    records: list[PublicationRecord] = []
    paper_no = 0
    for u in range(spec.n_units):
        unit_id = f"U{u + 1:0{unit_width}d}"
        n_papers = rng.randint(*spec.papers_per_unit)
        for _ in range(n_papers):
            paper_no += 1
            records.append(
                PublicationRecord(
                    paper_id=f"P{paper_no:07d}",
                    unit_id=unit_id,
                    venue_id=venues[rng.randint(0, spec.n_venues - 1)],
                    pub_year=rng.randint(*spec.years),
                    doc_type=DocType(_weighted_choice(rng, mix_items, mix_weights)),
                    citations=_draw_citations(rng, spec),
                )
            )
    return Corpus(records=tuple(records), census_year=census_year)


# --- dilution experiment ----------------------------------------------------


@dataclass(frozen=True)
class DilutionResult:
    """Before/after indicators for a unit that absorbed low-cited papers."""

    base_unit: str
    n_added: int
    cpp_before: float
    cpp_after: float
    i3_before: float
    i3_after: float
    moved_citations: tuple[int, ...]


def dilution_on_corpus(
    corpus: Corpus,
    base_unit: str,
    added_low_cited: int,
    scheme: RankClassScheme = CONTINUOUS,
) -> DilutionResult:
    """Reattribute the lowest-cited papers of other units to ``base_unit``
    and report c/p and integrated impact before and after.

    Reference sets depend on venue, year and document type, never on unit
    attribution, so they are identical before and after; the moved papers
    keep their percentile values. Absorbing papers cited below the unit's
    mean strictly lowers c/p, while integrated impact cannot decrease under
    a scheme with non-negative weights.
    """
    base_records = [r for r in corpus.records if r.unit_id == base_unit]
    if not base_records:
        raise DomainError(f"base unit {base_unit!r} has no papers")
    if added_low_cited < 0:
        raise DomainError(f"added_low_cited must be >= 0, got {added_low_cited}")

    base_paper_ids = {r.paper_id for r in base_records}
    candidates = sorted(
        (
            r
            for r in corpus.records
            if r.unit_id != base_unit and r.paper_id not in base_paper_ids
        ),
        key=lambda r: (r.citations, r.paper_id),
    )
    if added_low_cited > len(candidates):
        raise DomainError(
            f"cannot move {added_low_cited} papers to {base_unit!r}: "
            f"only {len(candidates)} papers belong to other units"
        )
    moved = {r.paper_id for r in candidates[:added_low_cited]}

    after_records = tuple(
        dataclasses.replace(r, unit_id=base_unit) if r.paper_id in moved else r
        for r in corpus.records
    )
    after = Corpus(records=after_records, census_year=corpus.census_year)

    def measure(c: Corpus) -> tuple[float, float]:
        refsets = build_reference_sets(c)
        scores = unit_percentiles(c, refsets=refsets)
        unit_records = [r for r in c.records if r.unit_id == base_unit]
        return (
            cpp(unit_records, base_unit).value,
            i3(scores.by_unit.get(base_unit, []), scheme, base_unit).value,
        )

    cpp_before, i3_before = measure(corpus)
    cpp_after, i3_after = measure(after)
    moved_citations = tuple(r.citations for r in candidates[:added_low_cited])
    return DilutionResult(
        base_unit=base_unit,
        n_added=added_low_cited,
        cpp_before=cpp_before,
        cpp_after=cpp_after,
        i3_before=i3_before,
        i3_after=i3_after,
        moved_citations=moved_citations,
    )


def dilution_experiment(
    spec: GeneratorSpec,
    base_unit: str,
    added_low_cited: int,
    scheme: RankClassScheme = CONTINUOUS,
) -> DilutionResult:
    """Generate a corpus from ``spec`` and run the dilution experiment on it."""
    return dilution_on_corpus(generate(spec), base_unit, added_low_cited, scheme)
