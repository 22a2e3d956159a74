"""Acceptance gate: eleven criteria covering goldens, oracle equivalence,
algebraic identities, null-model statistics and byte-level determinism.

Each criterion prints exactly one ACCEPTANCE nn <name>: PASS or FAIL line
on the terminal, bypassing output capture, and fails the test run on FAIL.
"""

import json
import math
import random
import time
from contextlib import contextmanager

import pytest
from click.testing import CliRunner

from citimpact import (
    CONTINUOUS,
    PR6,
    Corpus,
    DocType,
    GeneratorSpec,
    PublicationRecord,
    SignificanceResult,
    SplitMix64,
    build_report,
    correlations,
    dilution_on_corpus,
    excellence_indicator,
    excellence_scheme,
    export_citation_curve,
    export_percentile_curve,
    generate,
    i3,
    pr6,
    render,
    scheme_null_moments,
    total_citations,
    unit_percentiles,
    z_test_expectation,
)
from citimpact.cli import main
from citimpact.kernels import COUNTING_RULES, percentile_values

from oracle import counting_percentiles

# golden class counts, top class (weight 6) first
PI1_COUNTS_TOP_FIRST = (3, 3, 1, 3, 6, 7)
PI2_COUNTS_TOP_FIRST = (0, 5, 1, 10, 14, 35)


@contextmanager
def _criterion(capsys, number: int, name: str):
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:02d} {name}: FAIL")
        raise
    else:
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:02d} {name}: PASS")


def test_criterion_01_class_count_goldens(capsys):
    with _criterion(capsys, 1, "six-class weighted sums 65 and 122"):
        start = time.perf_counter()
        representatives = (25.0, 60.0, 80.0, 92.0, 97.0, 99.5)
        for top_first, expected in (
            (PI1_COUNTS_TOP_FIRST, 65),
            (PI2_COUNTS_TOP_FIRST, 122),
        ):
            counts = tuple(reversed(top_first))  # align with classes, weight 1 first
            plain_sum = sum(cls.weight * n for cls, n in zip(PR6.classes, counts))
            assert plain_sum == expected
            scores = [rep for rep, n in zip(representatives, counts) for _ in range(n)]
            value = i3(scores, PR6).value
            assert value == float(expected)
            assert int(value) == expected
        assert time.perf_counter() - start < 1.0


def test_criterion_02_fixture_end_to_end(capsys, demo_corpus_path):
    with _criterion(capsys, 2, "fixture corpus reproduces the golden table"):
        result = CliRunner().invoke(
            main,
            ["compute", "--input", str(demo_corpus_path), "--scheme", "PR6",
             "--rule", "mid", "--format", "json"],
        )
        assert result.exit_code == 0, result.output
        rows = {row["unit_id"]: row for row in json.loads(result.output)["rows"]}
        assert rows["PI1"]["i3"] == 65.0
        assert rows["PI2"]["i3"] == 122.0
        assert rows["PI2"]["rank_i3"] < rows["PI1"]["rank_i3"]
        assert abs(rows["PI1"]["value"] - 70.96) <= 0.005
        assert abs(rows["PI2"]["value"] - 24.28) <= 0.005
        assert rows["PI1"]["rank_value"] < rows["PI2"]["rank_value"]


def test_criterion_03_percentile_oracle_equivalence(capsys):
    with _criterion(capsys, 3, "percentiles equal the counting oracle"):
        rng = random.Random(0xC173)
        for _ in range(1000):
            n = rng.randint(1, 50)
            high = rng.choice((4, 25, 1_000_000))  # heavy ties through wide spreads
            citations = [rng.randint(0, high) for _ in range(n)]
            for rule in COUNTING_RULES:
                assert percentile_values(citations, rule) == counting_percentiles(
                    citations, rule
                )


def test_criterion_04_i3_additivity(capsys):
    with _criterion(capsys, 4, "i3 of a union is the sum of the parts"):
        rng = random.Random(0xADD)
        for _ in range(200):
            refset = [rng.randint(0, 40) for _ in range(rng.randint(2, 80))]
            mids = percentile_values(refset, "mid")
            unit = [mids[i] for i in rng.sample(range(len(mids)), rng.randint(0, len(mids)))]
            rng.shuffle(unit)
            cut = rng.randint(0, len(unit))
            part_a, part_b = unit[:cut], unit[cut:]
            whole = part_a + part_b
            assert i3(whole, PR6).value == i3(part_a, PR6).value + i3(part_b, PR6).value
            assert math.isclose(
                i3(whole).value,
                i3(part_a).value + i3(part_b).value,
                rel_tol=0.0,
                abs_tol=1e-9,
            )


def test_criterion_05_excellence_identity(capsys):
    with _criterion(capsys, 5, "top-x count equals i3 under the 0/1 scheme"):
        rng = random.Random(0xE1)
        for _ in range(200):
            scores = [rng.uniform(0.0, 100.0) for _ in range(rng.randint(0, 60))]
            top = rng.choice((1.0, 2.5, 5.0, 10.0, 20.0, 50.0, 90.0))
            assert (
                excellence_indicator(scores, top).value
                == i3(scores, excellence_scheme(top)).value
            )


def test_criterion_06_curve_integration(capsys):
    with _criterion(capsys, 6, "curve areas equal totals"):
        rng = random.Random(0xC02E)
        for trial in range(200):
            n = rng.randint(1, 40)
            records = [
                PublicationRecord(
                    f"t{trial}p{i}", "U", "J", 2000, DocType.ARTICLE, rng.randint(0, 300)
                )
                for i in range(n)
            ]
            series = export_citation_curve(records)
            assert sum(v for _, v in series) == total_citations(records).value
            scores = [rng.uniform(0.0, 100.0) for _ in range(n)]
            curve = export_percentile_curve(scores)
            assert math.isclose(
                math.fsum(v for _, v in curve),
                i3(scores, CONTINUOUS).value,
                rel_tol=0.0,
                abs_tol=1e-9,
            )


def test_criterion_07_dilution(capsys):
    with _criterion(capsys, 7, "absorbing a below-average paper lowers c/p, not I3"):
        rng = random.Random(0xD117)
        schemes = (CONTINUOUS, PR6, excellence_scheme(10.0))
        trials = 0
        while trials < 200:
            base = [rng.randint(0, 50) for _ in range(rng.randint(2, 30))]
            mean = sum(base) / len(base)
            if mean <= 0.0:
                continue
            donor = rng.randint(0, math.floor(mean - 1e-9)) if mean >= 1.0 else 0
            assert donor < mean
            records = [
                PublicationRecord(f"p{i}", "BASE", "J", 2000, DocType.ARTICLE, c)
                for i, c in enumerate(base)
            ]
            records.append(
                PublicationRecord("xlow", "OTHER", "J", 2000, DocType.ARTICLE, donor)
            )
            corpus = Corpus(tuple(records))
            for scheme in schemes:
                outcome = dilution_on_corpus(corpus, "BASE", 1, scheme)
                assert outcome.cpp_after < outcome.cpp_before
                assert outcome.i3_after >= outcome.i3_before
            trials += 1


def _sig_above(unit):
    return SignificanceResult(
        unit_id=unit, indicator="PR6", z=3.0, p_two_sided=0.001,
        direction="above", alpha=0.01, n=10,
    )


def test_criterion_08_share_normalization_and_row_shape(capsys):
    with _criterion(capsys, 8, "shares sum to 100 and rows render to the golden shape"):
        rng = random.Random(0x100)
        for _ in range(50):
            units = {
                f"U{k}": {
                    "n_papers": rng.randint(1, 500),
                    "total_citations": rng.randint(0, 9999),
                    "i3": rng.uniform(0.1, 5000.0),
                    "pr6": rng.uniform(0.1, 3000.0),
                    "ei": float(rng.randint(0, 50)),
                    "cpp": rng.uniform(0.0, 80.0),
                }
                for k in range(rng.randint(2, 9))
            }
            report = build_report(units)
            assert math.isclose(
                math.fsum(r.pct_i3 for r in report.rows), 100.0, rel_tol=0.0, abs_tol=1e-9
            )
            assert math.isclose(
                math.fsum(r.pct_pr6 for r in report.rows), 100.0, rel_tol=0.0, abs_tol=1e-9
            )

        flagship = "Proc Nat Acad Sci USA"
        journals = {
            flagship: {"n_papers": 7058, "total_citations": 178137, "i3": 4329.0,
                       "pr6": 3364.0, "ei": 721.0, "jif": 9.432},
            "Nature": {"n_papers": 850, "total_citations": 90000, "i3": 3000.0,
                       "pr6": 3300.0, "ei": 600.0, "jif": 11.5},
            "Science": {"n_papers": 800, "total_citations": 80000, "i3": 2671.0,
                        "pr6": 3336.0, "ei": 500.0, "jif": 10.1},
        }
        significance = {flagship: {"i3": _sig_above(flagship), "pr6": _sig_above(flagship)}}
        table = render(
            build_report(journals, significance, value_label="jif"), "text-table"
        ).decode("utf-8")
        assert "7,058" in table
        assert "178,137" in table
        assert "43.29 [1] ⁺" in table
        assert "33.64 [1] ⁺" in table
        assert "9.432 [3]" in table


def test_criterion_09_null_model(capsys):
    with _criterion(capsys, 9, "analytic null moments match Monte-Carlo"):
        mu0, sigma0 = scheme_null_moments(PR6)
        assert mu0 == pytest.approx(1.91, abs=1e-12)
        assert sigma0**2 == pytest.approx(1.3619, abs=1e-12)

        rng = SplitMix64(0x91)
        total = 0.0
        total_sq = 0.0
        draws = 1_000_000
        for _ in range(draws):
            weight = PR6.classify(rng.random() * 100.0)[1]
            total += weight
            total_sq += weight * weight
        mc_mean = total / draws
        mc_var = total_sq / draws - mc_mean * mc_mean
        assert abs(mc_mean - mu0) <= 0.01
        assert abs(mc_var - sigma0**2) <= 0.01

        inside = 0
        for _ in range(1000):
            n = 20 + int(rng.random() * 180)
            scores = [rng.random() * 100.0 for _ in range(n)]
            if abs(z_test_expectation(scores, PR6).z) < 2.58:
                inside += 1
        assert inside >= 980


def test_criterion_10_correlation_sanity(capsys):
    with _criterion(capsys, 10, "rank correlations behave and track each other"):
        rng = random.Random(0xC0)
        xs = sorted(rng.uniform(-5.0, 5.0) for _ in range(30))
        for transform in (math.exp, lambda v: v**3, lambda v: 7.0 * v - 3.0):
            matrix = correlations({"x": xs, "y": [transform(v) for v in xs]})
            assert matrix.spearman[0][1] == 1.0

        hand = correlations({"x": [1.0, 2.0, 3.0, 4.0], "y": [2.0, 1.0, 4.0, 3.0]})
        assert hand.spearman[0][1] == 0.6

        spec = GeneratorSpec(
            seed=48, n_units=48, papers_per_unit=(20, 120),
            distribution="power-law", alpha=2.5, c_min=1.0,
        )
        scores = unit_percentiles(generate(spec), None, "mid")
        units = sorted(scores.by_unit)
        columns = {
            "i3": [i3(scores.by_unit[u]).value for u in units],
            "pr6": [pr6(scores.by_unit[u]).value for u in units],
        }
        rho = correlations(columns).spearman[0][1]
        assert rho > 0.9


def test_criterion_11_determinism(capsys, demo_corpus_path, tmp_path):
    with _criterion(capsys, 11, "byte-identical reports across runs and threads"):
        runner = CliRunner()
        args = ["compute", "--input", str(demo_corpus_path), "--scheme", "PR6"]
        first = runner.invoke(main, args)
        second = runner.invoke(main, args)
        assert first.exit_code == 0 and second.exit_code == 0
        assert first.stdout_bytes == second.stdout_bytes
        threaded = [
            runner.invoke(main, args + ["--threads", str(k)]) for k in (1, 2, 8)
        ]
        assert all(r.exit_code == 0 for r in threaded)
        assert len({r.stdout_bytes for r in threaded}) == 1
        assert threaded[0].stdout_bytes == first.stdout_bytes

        spec_path = tmp_path / "gen.json"
        spec_path.write_text(
            json.dumps({"seed": 11, "n_units": 5, "papers_per_unit": [10, 30]}),
            encoding="utf-8",
        )
        sims = [
            runner.invoke(main, ["simulate", "--spec", str(spec_path)]) for _ in range(2)
        ]
        assert all(r.exit_code == 0 for r in sims)
        assert sims[0].stdout_bytes == sims[1].stdout_bytes
