"""Command-line pipeline: ingestion, reference sets, indicators, reports.

One binary, five subcommands: compute (ranked indicator table), compare
(two-unit significance test), correlate (indicator correlation matrix),
curves (per-unit citation or percentile series) and simulate (synthetic
corpus generation).

Diagnostics go to stderr through logging; data goes to --output or stdout,
so reports are pipe-safe. Output files are written to a temporary name and
renamed into place, so a failing run never leaves a partial file. Given the
same inputs and seed, output bytes are identical across runs and across
--threads settings (the thread count is an execution detail and is kept out
of the embedded run configuration).
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import click

from .corpus import corpus_csv_text, group_by_unit, load_corpus
from .errors import CitimpactError, DomainError, UndefinedIndicatorError
from .indicators import cpp, excellence_indicator, i3, jif, mncs, pr6, rcr, total_citations
from .inference import (
    DEFAULT_ALPHA,
    MEAN_WEIGHT_TEST,
    TOP_SHARE_TEST,
    correlations,
    z_test_top_share_two_units,
    z_test_two_units,
)
from .kernels import BACKEND, COUNTING_RULES
from .refsets import (
    DEFAULT_RULE,
    ScopeConfig,
    build_reference_sets,
    export_scores_csv,
    unit_percentiles,
)
from .reporting import (
    export_citation_curve,
    export_percentile_curve,
    full_report,
    render,
    render_correlations,
    render_curves_csv,
    render_curves_svg,
)
from .schemes import load_scheme_file, named_scheme
from .synthgen import GeneratorSpec, generate

logger = logging.getLogger("citimpact")

_ALPHA_RANGE = click.FloatRange(0.0, 1.0, min_open=True, max_open=True)
_CORRELATE_INDICATORS = ("i3", "pr6", "ei", "cpp", "citations", "jif", "rcr", "mncs")


def _write_atomic(path_str: str, data: bytes) -> None:
    """Write-then-rename so no error path leaves a partial output file."""
    path = Path(path_str)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp_name = tempfile.mkstemp(dir=str(directory), prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def _emit(data: bytes, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        _write_atomic(output, data)


def _resolve_scheme(scheme_name: str, scheme_file: str | None):
    if scheme_file is not None:
        return load_scheme_file(scheme_file)
    return named_scheme(scheme_name)


def _scope_config(scopes_path: str | None) -> ScopeConfig | None:
    return ScopeConfig.from_file(scopes_path) if scopes_path else None


def _threads_or_default(threads: int | None) -> int:
    return threads if threads is not None else (os.cpu_count() or 1)


def _units_arg(raw: str | None, available) -> list[str]:
    if raw is None:
        return sorted(available)
    units = [u.strip() for u in raw.split(",") if u.strip()]
    if not units:
        raise DomainError("empty unit list")
    unknown = [u for u in units if u not in available]
    if unknown:
        raise DomainError(f"unknown unit id(s): {', '.join(unknown)}")
    return units


class _Command(click.Command):
    """Command variant that turns library errors into clean CLI failures."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CitimpactError as exc:
            raise click.ClickException(str(exc)) from exc
        except OSError as exc:
            raise click.ClickException(f"cannot write output: {exc}") from exc


@click.group()
@click.version_option(package_name="citimpact")
@click.option("-v", "--verbose", count=True, help="Increase diagnostics (-v info, -vv debug).")
def main(verbose: int) -> None:
    """Non-parametric citation impact indicators from publication records.

    Input is a delimited table with columns paper_id, unit_id, venue_id,
    pub_year, doc_type, citations. Papers are scored as percentiles within
    their reference set (venue scope x publication year x document type) and
    aggregated into integrated impact, rank classes and excellence scores.
    """
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")
    logger.debug("percentile kernel backend: %s", BACKEND)


_input_option = click.option(
    "--input",
    "input_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Publication records (CSV).",
)
_scopes_option = click.option(
    "--scopes",
    "scopes_path",
    envvar="CITIMPACT_SCOPES",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON scope config mapping reference-set names to venue lists "
    "(default: each venue is its own scope). Env: CITIMPACT_SCOPES.",
)
_rule_option = click.option(
    "--rule",
    type=click.Choice(COUNTING_RULES),
    default=DEFAULT_RULE,
    show_default=True,
    help="Percentile counting rule for ties.",
)
_doc_type_option = click.option(
    "--no-doc-type-control",
    "doc_type_control",
    is_flag=True,
    flag_value=False,
    default=True,
    help="Pool all document types into one reference set per scope and year.",
)
_threads_option = click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    help="Reference-set scoring threads [default: logical CPUs]. "
    "Output bytes do not depend on this.",
)
_output_option = click.option(
    "--output", "-o", default=None, help="Output path; stdout when omitted."
)


@main.command(cls=_Command)
@_input_option
@_scopes_option
@_rule_option
@click.option(
    "--scheme",
    default="CONTINUOUS",
    show_default=True,
    help="Weighting scheme for the I3 column: CONTINUOUS, PR6 or EI<x>.",
)
@click.option(
    "--scheme-file",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Custom scheme as a JSON list of {lower, upper, weight} classes.",
)
@click.option("--ei-top", type=click.FloatRange(0.0, 100.0, min_open=True, max_open=True),
              default=10.0, show_default=True, help="Top percentage for the EI column.")
@click.option("--alpha", type=_ALPHA_RANGE, default=DEFAULT_ALPHA, show_default=True,
              help="Significance level for the table marks.")
@click.option("--census-year", type=int, default=None,
              help="Year the citation counts were observed (needed for --jif).")
@click.option("--jif", "jif_mode", is_flag=True,
              help="Value column becomes the two-year impact factor; unit ids must be venues.")
@_doc_type_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "text-table"]),
              default="csv", show_default=True)
@click.option("--scores-out", default=None,
              help="Also write the per-paper percentile table to this path (CSV).")
@_threads_option
@_output_option
def compute(
    input_path,
    scopes_path,
    rule,
    scheme,
    scheme_file,
    ei_top,
    alpha,
    census_year,
    jif_mode,
    doc_type_control,
    fmt,
    scores_out,
    threads,
    output,
):
    """Compute the ranked indicator table for every unit in the input."""
    corpus = load_corpus(input_path, census_year=census_year)
    scope_config = _scope_config(scopes_path)
    scheme_obj = _resolve_scheme(scheme, scheme_file)
    scores = unit_percentiles(
        corpus,
        scope_config,
        rule,
        doc_type_control=doc_type_control,
        threads=_threads_or_default(threads),
    )
    run_config = {
        "subcommand": "compute",
        "input": input_path,
        "scopes": scopes_path,
        "rule": rule,
        "scheme": scheme_obj.name,
        "scheme_file": scheme_file,
        "ei_top": ei_top,
        "alpha": alpha,
        "census_year": census_year,
        "jif": jif_mode,
        "doc_type_control": doc_type_control,
        "format": fmt,
    }
    report = full_report(
        corpus,
        scope_config=scope_config,
        rule=rule,
        i3_scheme=scheme_obj,
        ei_top=ei_top,
        alpha=alpha,
        doc_type_control=doc_type_control,
        jif_mode=jif_mode,
        run_config=run_config,
        scores=scores,
    )
    if scores_out:
        flat = [s for unit in sorted(scores.by_unit) for s in scores.by_unit[unit]]
        _write_atomic(scores_out, export_scores_csv(flat).encode("utf-8"))
    _emit(render(report, fmt), output)


@main.command(cls=_Command)
@click.argument("unit_a")
@click.argument("unit_b")
@_input_option
@_scopes_option
@_rule_option
@click.option("--scheme", default="PR6", show_default=True,
              help="Weighting scheme for the mean-weight test.")
@click.option("--scheme-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--test", "test_mode", type=click.Choice([MEAN_WEIGHT_TEST, TOP_SHARE_TEST]),
              default=MEAN_WEIGHT_TEST, show_default=True,
              help="mean-weight: z on mean class weights; top-share: two-proportion z "
              "on top-x% shares.")
@click.option("--top-x", type=click.FloatRange(0.0, 100.0, min_open=True, max_open=True),
              default=10.0, show_default=True, help="Top percentage for --test top-share.")
@click.option("--alpha", type=_ALPHA_RANGE, default=DEFAULT_ALPHA, show_default=True)
@_doc_type_option
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@_threads_option
@_output_option
def compare(
    unit_a,
    unit_b,
    input_path,
    scopes_path,
    rule,
    scheme,
    scheme_file,
    test_mode,
    top_x,
    alpha,
    doc_type_control,
    fmt,
    threads,
    output,
):
    """Test whether UNIT_A's impact differs significantly from UNIT_B's."""
    corpus = load_corpus(input_path)
    scores = unit_percentiles(
        corpus,
        _scope_config(scopes_path),
        rule,
        doc_type_control=doc_type_control,
        threads=_threads_or_default(threads),
    )
    for unit in (unit_a, unit_b):
        if unit not in scores.by_unit:
            raise DomainError(f"unknown unit id {unit!r}")
    scores_a, scores_b = scores.by_unit[unit_a], scores.by_unit[unit_b]
    if test_mode == MEAN_WEIGHT_TEST:
        scheme_obj = _resolve_scheme(scheme, scheme_file)
        result = z_test_two_units(
            scores_a, scores_b, scheme_obj, alpha=alpha, unit_a=unit_a, unit_b=unit_b
        )
    else:
        result = z_test_top_share_two_units(
            scores_a, scores_b, top_x, alpha=alpha, unit_a=unit_a, unit_b=unit_b
        )
    significant = result.p_two_sided < alpha
    if fmt == "json":
        payload = {
            "unit_a": unit_a,
            "unit_b": unit_b,
            "n_a": len(scores_a),
            "n_b": len(scores_b),
            "indicator": result.indicator,
            "test": result.test,
            "rule": rule,
            "z": result.z,
            "p_two_sided": result.p_two_sided,
            "alpha": alpha,
            "significant": significant,
            "direction": result.direction,
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        relation = {"above": "above", "below": "below"}.get(result.direction)
        verdict = (
            f"yes ({unit_a} {relation} {unit_b})" if significant and relation else "no"
        )
        text = (
            f"unit A: {unit_a} (n={len(scores_a)})\n"
            f"unit B: {unit_b} (n={len(scores_b)})\n"
            f"test: {result.test} on {result.indicator} ({rule} percentiles)\n"
            f"z = {result.z:.4f}\n"
            f"p (two-sided) = {result.p_two_sided:.6g}\n"
            f"significant at alpha {alpha:g}: {verdict}\n"
        )
    _emit(text.encode("utf-8"), output)


@main.command(cls=_Command)
@_input_option
@_scopes_option
@_rule_option
@click.option("--indicators", default="i3,pr6,ei,cpp", show_default=True,
              help=f"Comma-separated subset of {', '.join(_CORRELATE_INDICATORS)}.")
@click.option("--scheme", default="CONTINUOUS", show_default=True,
              help="Weighting scheme behind the i3 column.")
@click.option("--scheme-file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--ei-top", type=click.FloatRange(0.0, 100.0, min_open=True, max_open=True),
              default=10.0, show_default=True)
@click.option("--census-year", type=int, default=None,
              help="Needed when the indicator list includes jif.")
@_doc_type_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "text-table"]),
              default="csv", show_default=True)
@_threads_option
@_output_option
def correlate(
    input_path,
    scopes_path,
    rule,
    indicators,
    scheme,
    scheme_file,
    ei_top,
    census_year,
    doc_type_control,
    fmt,
    threads,
    output,
):
    """Correlate indicators across units: Pearson r and rank-order rho."""
    names = [n.strip().lower() for n in indicators.split(",") if n.strip()]
    unknown = [n for n in names if n not in _CORRELATE_INDICATORS]
    if unknown:
        raise DomainError(
            f"unknown indicator(s): {', '.join(unknown)}; "
            f"expected a subset of {', '.join(_CORRELATE_INDICATORS)}"
        )
    if len(set(names)) < 2:
        raise DomainError("need at least two distinct indicators to correlate")

    corpus = load_corpus(input_path, census_year=census_year)
    scope_config = _scope_config(scopes_path)
    scheme_obj = _resolve_scheme(scheme, scheme_file)
    refsets = build_reference_sets(corpus, scope_config, doc_type_control=doc_type_control)
    scores = unit_percentiles(
        corpus,
        rule=rule,
        threads=_threads_or_default(threads),
        refsets=refsets,
    )
    records_by_unit = group_by_unit(corpus)

    def value_of(name: str, unit: str) -> float | None:
        records = records_by_unit[unit]
        unit_scores = scores.by_unit.get(unit, [])
        try:
            if name == "i3":
                return i3(unit_scores, scheme_obj, unit).value
            if name == "pr6":
                return pr6(unit_scores, unit).value
            if name == "ei":
                return excellence_indicator(unit_scores, ei_top, unit).value
            if name == "cpp":
                return cpp(records, unit).value
            if name == "citations":
                return total_citations(records, unit).value
            if name == "jif":
                return jif(corpus, unit, census_year).value
            if name == "rcr":
                return rcr(records, refsets, unit).value
            return mncs(records, refsets, unit).value
        except (UndefinedIndicatorError, DomainError) as exc:
            logger.warning("unit %s dropped from correlation: %s", unit, exc)
            return None

    columns: dict[str, list[float]] = {name: [] for name in names}
    for unit in records_by_unit:
        row = {name: value_of(name, unit) for name in names}
        if any(v is None for v in row.values()):
            continue  # listwise deletion keeps the matrix consistent
        for name in names:
            columns[name].append(row[name])
    matrix = correlations(columns)
    _emit(render_correlations(matrix, fmt), output)


@main.command(cls=_Command)
@_input_option
@_scopes_option
@_rule_option
@click.option("--kind", type=click.Choice(["citation", "percentile"]), default="percentile",
              show_default=True, help="Series on the y axis: raw counts or percentile values.")
@click.option("--units", default=None,
              help="Comma-separated unit ids to plot [default: all units].")
@_doc_type_option
@click.option("--format", "fmt", type=click.Choice(["csv", "svg"]), default="svg",
              show_default=True)
@_threads_option
@_output_option
def curves(
    input_path,
    scopes_path,
    rule,
    kind,
    units,
    doc_type_control,
    fmt,
    threads,
    output,
):
    """Export rank-ordered impact curves (the area equals the total impact)."""
    corpus = load_corpus(input_path)
    records_by_unit = group_by_unit(corpus)
    selected = _units_arg(units, records_by_unit)
    series: dict[str, list[tuple[int, float]]] = {}
    if kind == "citation":
        for unit in selected:
            series[unit] = [
                (rank, float(c)) for rank, c in export_citation_curve(records_by_unit[unit])
            ]
        y_label = "citations"
    else:
        scores = unit_percentiles(
            corpus,
            _scope_config(scopes_path),
            rule,
            doc_type_control=doc_type_control,
            threads=_threads_or_default(threads),
        )
        for unit in selected:
            series[unit] = export_percentile_curve(scores.by_unit.get(unit, []))
        y_label = "percentile"
    if fmt == "svg":
        text = render_curves_svg(series, title=f"{kind} curves", y_label=y_label)
    else:
        text = render_curves_csv(series)
    _emit(text.encode("utf-8"), output)


@main.command(cls=_Command)
@click.option("--spec", "spec_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Generator spec (JSON object with GeneratorSpec fields).")
@click.option("--seed", type=int, default=None, help="Override the seed in the spec file.")
@_output_option
def simulate(spec_path, seed, output):
    """Generate a synthetic skewed corpus and write it as corpus CSV."""
    spec = GeneratorSpec.from_file(spec_path)
    if seed is not None:
        spec = dataclasses.replace(spec, seed=seed)
    corpus = generate(spec)
    logger.info("generated %d records for %d units (seed %d)", len(corpus), spec.n_units, spec.seed)
    _emit(corpus_csv_text(corpus).encode("utf-8"), output)


if __name__ == "__main__":
    main()
