"""Synthetic corpus generator: seed determinism, distribution shape,
spec validation and the dilution experiment."""

import json
import math
import statistics

import pytest

from citimpact import (
    CONTINUOUS,
    ConfigError,
    Corpus,
    DocType,
    DomainError,
    GeneratorSpec,
    PublicationRecord,
    SplitMix64,
    corpus_csv_text,
    dilution_experiment,
    dilution_on_corpus,
    generate,
    load_corpus,
    save_corpus,
)


def test_splitmix64_reference_stream():
    # first outputs for seed 0 from the reference implementation
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4
    assert rng.next_u64() == 0x06C45D188009454F


def test_splitmix64_doubles_in_unit_interval():
    rng = SplitMix64(123)
    xs = [rng.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert 0.4 < statistics.fmean(xs) < 0.6


def test_constant_distribution():
    spec = GeneratorSpec(
        seed=1, n_units=1, papers_per_unit=(3, 3), distribution="constant", value=5
    )
    corpus = generate(spec)
    assert len(corpus) == 3
    assert all(r.citations == 5 for r in corpus)


def test_seed_determinism_byte_identical():
    spec = GeneratorSpec(seed=99, n_units=4, papers_per_unit=(5, 15), n_venues=3)
    a, b = generate(spec), generate(spec)
    assert a.records == b.records
    assert corpus_csv_text(a) == corpus_csv_text(b)
    different = generate(GeneratorSpec(seed=100, n_units=4, papers_per_unit=(5, 15), n_venues=3))
    assert different.records != a.records


def test_power_law_sample_is_right_skewed():
    spec = GeneratorSpec(
        seed=7,
        n_units=1,
        papers_per_unit=(10000, 10000),
        distribution="power-law",
        alpha=2.5,
        c_min=1.0,
    )
    citations = [r.citations for r in generate(spec)]
    assert len(citations) == 10000
    mean = statistics.fmean(citations)
    median = statistics.median(citations)
    assert median < mean
    sd = statistics.pstdev(citations)
    skewness = sum((c - mean) ** 3 for c in citations) / (len(citations) * sd**3)
    assert skewness > 0


def test_lognormal_nonnegative_integers():
    spec = GeneratorSpec(
        seed=3, n_units=2, papers_per_unit=(50, 50), distribution="lognormal", mu=1.0, sigma=1.2
    )
    for record in generate(spec):
        assert isinstance(record.citations, int)
        assert record.citations >= 0


def test_generated_corpus_passes_corpus_validation(tmp_path):
    spec = GeneratorSpec(
        seed=11,
        n_units=3,
        papers_per_unit=(4, 9),
        n_venues=2,
        years=(2001, 2003),
        doc_type_mix={"article": 0.7, "review": 0.2, "letter": 0.1},
    )
    corpus = generate(spec)
    path = tmp_path / "gen.csv"
    save_corpus(corpus, path)
    again = load_corpus(path)
    assert again.records == corpus.records
    years = {r.pub_year for r in corpus}
    assert years <= {2001, 2002, 2003}
    assert {r.venue_id for r in corpus} <= {"V01", "V02"}


def test_spec_validation_errors():
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=0, papers_per_unit=(1, 2))
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=1, papers_per_unit=(5, 2))
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=1, papers_per_unit=(1, 2), distribution="zipf")
    with pytest.raises(ConfigError):
        GeneratorSpec(
            seed=1, n_units=1, papers_per_unit=(1, 2), distribution="power-law", alpha=1.0
        )
    with pytest.raises(ConfigError):
        GeneratorSpec(
            seed=1, n_units=1, papers_per_unit=(1, 2), distribution="lognormal", sigma=-0.1
        )
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=1, papers_per_unit=(1, 2), doc_type_mix={})
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=1, papers_per_unit=(1, 2), doc_type_mix={"thesis": 1.0})
    with pytest.raises(ConfigError):
        GeneratorSpec(seed=1, n_units=1, papers_per_unit=(1, 2), years=(2005, 2001))


def test_spec_from_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(
        json.dumps(
            {
                "seed": 42,
                "n_units": 2,
                "papers_per_unit": [3, 6],
                "distribution": "constant",
                "value": 2,
                "years": [2004, 2005],
            }
        ),
        encoding="utf-8",
    )
    spec = GeneratorSpec.from_file(path)
    assert spec.seed == 42
    assert spec.papers_per_unit == (3, 6)
    assert spec.years == (2004, 2005)

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"seed": 1, "n_units": 1, "pprs": [1, 2]}), encoding="utf-8")
    with pytest.raises(ConfigError):
        GeneratorSpec.from_file(bad)
    notjson = tmp_path / "nj.json"
    notjson.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        GeneratorSpec.from_file(notjson)


# --- dilution ----------------------------------------------------------------


def _rec(pid, unit, cites):
    return PublicationRecord(pid, unit, "J", 2000, DocType.ARTICLE, cites)


def test_dilution_base_100_100_add_0():
    corpus = Corpus((_rec("p1", "PI", 100), _rec("p2", "PI", 100), _rec("p3", "TEAM", 0)))
    result = dilution_on_corpus(corpus, "PI", 1)
    assert result.cpp_before == 100.0
    assert math.isclose(result.cpp_after, 200 / 3, abs_tol=1e-9)
    assert round(result.cpp_after, 2) == 66.67
    assert result.i3_after >= result.i3_before
    assert result.moved_citations == (0,)


def test_dilution_control_case_adding_above_mean_raises_cpp():
    corpus = Corpus((_rec("p1", "PI", 10), _rec("p2", "PI", 10), _rec("p3", "TEAM", 100)))
    result = dilution_on_corpus(corpus, "PI", 1)
    assert result.cpp_after > result.cpp_before


def test_dilution_zero_added_is_identity():
    corpus = Corpus((_rec("p1", "PI", 5), _rec("p2", "TEAM", 1)))
    result = dilution_on_corpus(corpus, "PI", 0)
    assert result.cpp_before == result.cpp_after
    assert result.i3_before == result.i3_after
    assert result.moved_citations == ()


def test_dilution_i3_never_decreases_nonnegative_weights():
    spec = GeneratorSpec(
        seed=77, n_units=6, papers_per_unit=(10, 25), distribution="power-law", n_venues=2
    )
    for k in (1, 3, 7):
        result = dilution_experiment(spec, "U01", k, CONTINUOUS)
        assert result.i3_after >= result.i3_before
        assert result.n_added == k


def test_dilution_errors():
    corpus = Corpus((_rec("p1", "PI", 5), _rec("p2", "TEAM", 1)))
    with pytest.raises(DomainError):
        dilution_on_corpus(corpus, "GHOST", 1)
    with pytest.raises(DomainError):
        dilution_on_corpus(corpus, "PI", 2)  # only one paper belongs to others
    with pytest.raises(DomainError):
        dilution_on_corpus(corpus, "PI", -1)
