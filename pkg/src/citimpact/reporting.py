"""Ranked indicator tables, correlation tables and curve exports.

All renderers return bytes and are deterministic: identical inputs yield
identical output, whatever the thread count that produced the values.
Decimal conventions follow the usual presentation of these tables: shares
with 2 decimals, impact factors with 3, c/p with 2. Ranks appear in square
brackets; significant deviations from expectation carry a superscript
plus or minus.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

from .corpus import Corpus, PublicationRecord, group_by_unit
from .errors import ConfigError, DomainError, UndefinedIndicatorError
from .indicators import cpp, excellence_indicator, i3, jif, pr6, total_citations
from .inference import DEFAULT_ALPHA, CorrelationMatrix, SignificanceResult, z_test_expectation
from .refsets import (
    PercentileScore,
    ScopeConfig,
    UnitScores,
    build_reference_sets,
    unit_percentiles,
)
from .schemes import BOUNDARY_CONVENTION, CONTINUOUS, PR6, RankClassScheme

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("csv", "json", "text-table", "svg-curves")


@dataclass(frozen=True)
class ReportRow:
    unit_id: str
    n_papers: int
    total_citations: int
    i3: float
    pct_i3: float | None
    rank_i3: int
    mark_i3: str
    pr6: float
    pct_pr6: float | None
    rank_pr6: int
    mark_pr6: str
    ei: float
    rank_ei: int
    value: float | None  # c/p or JIF depending on the evaluation mode
    rank_value: int | None


@dataclass
class IndicatorReport:
    rows: tuple[ReportRow, ...]
    metadata: dict
    curves: dict[str, list[tuple[int, float]]] | None = None

    def row(self, unit_id: str) -> ReportRow:
        for row in self.rows:
            if row.unit_id == unit_id:
                return row
        raise KeyError(unit_id)


def _ranks(values: Mapping[str, float | None]) -> tuple[dict[str, int | None], bool]:
    """Dense 1..k ranks by descending value; ties broken by unit id and
    flagged. Units with an undefined value get no rank."""
    defined = [(unit, v) for unit, v in values.items() if v is not None]
    defined.sort(key=lambda item: (-item[1], item[0]))
    ranks: dict[str, int | None] = {unit: None for unit in values}
    for position, (unit, _) in enumerate(defined, start=1):
        ranks[unit] = position
    had_ties = len({v for _, v in defined}) < len(defined)
    return ranks, had_ties


def _shares(values: Mapping[str, float]) -> dict[str, float | None]:
    total = math.fsum(values.values())
    if total == 0.0:
        return {unit: None for unit in values}
    return {unit: 100.0 * v / total for unit, v in values.items()}


def build_report(
    unit_indicators: Mapping[str, Mapping[str, float | None]],
    significance: Mapping[str, Mapping[str, SignificanceResult | None]] | None = None,
    metadata: Mapping | None = None,
    value_label: str = "cpp",
) -> IndicatorReport:
    """Assemble the ranked table from precomputed per-unit indicators.

    ``unit_indicators`` maps unit id to a dict with keys n_papers,
    total_citations, i3, pr6, ei and ``value_label``; ``significance`` may
    carry per-unit results under keys "i3" and "pr6". Shares are the unit's
    percentage of the column total over all evaluated units.
    """
    if not unit_indicators:
        raise DomainError("cannot build a report for an empty unit set")
    significance = significance or {}

    i3_values = {u: float(cols["i3"]) for u, cols in unit_indicators.items()}
    pr6_values = {u: float(cols["pr6"]) for u, cols in unit_indicators.items()}
    ei_values = {u: float(cols["ei"]) for u, cols in unit_indicators.items()}
    main_values = {u: cols.get(value_label) for u, cols in unit_indicators.items()}

    pct_i3 = _shares(i3_values)
    pct_pr6 = _shares(pr6_values)
    rank_i3, ties_i3 = _ranks(i3_values)
    rank_pr6, ties_pr6 = _ranks(pr6_values)
    rank_ei, ties_ei = _ranks(ei_values)
    rank_value, ties_value = _ranks(main_values)

    def mark(unit: str, column: str) -> str:
        result = significance.get(unit, {}).get(column)
        return result.mark if result is not None else ""

    rows = []
    for unit, cols in unit_indicators.items():
        rows.append(
            ReportRow(
                unit_id=unit,
                n_papers=int(cols["n_papers"]),
                total_citations=int(cols["total_citations"]),
                i3=i3_values[unit],
                pct_i3=pct_i3[unit],
                rank_i3=rank_i3[unit],
                mark_i3=mark(unit, "i3"),
                pr6=pr6_values[unit],
                pct_pr6=pct_pr6[unit],
                rank_pr6=rank_pr6[unit],
                mark_pr6=mark(unit, "pr6"),
                ei=ei_values[unit],
                rank_ei=rank_ei[unit],
                value=main_values[unit],
                rank_value=rank_value[unit],
            )
        )
    rows.sort(key=lambda r: (r.rank_i3, r.unit_id))

    meta = dict(metadata or {})
    meta.setdefault("value_column", value_label)
    meta.setdefault("boundary_convention", BOUNDARY_CONVENTION)
    tie_columns = [
        name
        for name, tied in (
            ("i3", ties_i3),
            ("pr6", ties_pr6),
            ("ei", ties_ei),
            (value_label, ties_value),
        )
        if tied
    ]
    if tie_columns:
        meta["rank_ties"] = tie_columns  # broken lexicographically by unit_id
    return IndicatorReport(rows=tuple(rows), metadata=meta)


def full_report(
    corpus: Corpus,
    *,
    scope_config: ScopeConfig | None = None,
    rule: str = "mid",
    i3_scheme: RankClassScheme = CONTINUOUS,
    ei_top: float = 10.0,
    alpha: float = DEFAULT_ALPHA,
    doc_type_control: bool = True,
    jif_mode: bool = False,
    threads: int | None = None,
    run_config: Mapping | None = None,
    scores: UnitScores | None = None,
) -> IndicatorReport:
    """Full pipeline: reference sets -> percentiles -> indicators -> report.

    In ``jif_mode`` the per-unit value column is the two-year impact factor
    (units are then venues and the corpus census year must be set);
    otherwise it is the plain c/p ratio. ``scores`` short-circuits the
    percentile stage when the caller already holds them.
    """
    if jif_mode and corpus.census_year is None:
        raise ConfigError("impact-factor reports need a corpus census year")
    if scores is None:
        refsets = build_reference_sets(corpus, scope_config, doc_type_control=doc_type_control)
        scores = unit_percentiles(corpus, rule=rule, threads=threads, refsets=refsets)
    records_by_unit = group_by_unit(corpus)

    unit_indicators: dict[str, dict[str, float | None]] = {}
    significance: dict[str, dict[str, SignificanceResult | None]] = {}
    value_label = "jif" if jif_mode else "cpp"

    for unit, records in records_by_unit.items():
        unit_scores = scores.by_unit.get(unit, [])
        cols: dict[str, float | None] = {
            "n_papers": float(len(records)),
            "total_citations": total_citations(records, unit).value,
            "i3": i3(unit_scores, i3_scheme, unit).value,
            "pr6": pr6(unit_scores, unit).value,
            "ei": excellence_indicator(unit_scores, ei_top, unit).value,
        }
        if jif_mode:
            try:
                cols["jif"] = jif(corpus, unit, corpus.census_year).value
            except UndefinedIndicatorError as exc:
                logger.warning("%s", exc)
                cols["jif"] = None
        else:
            cols["cpp"] = cpp(records, unit).value
        unit_indicators[unit] = cols

        marks: dict[str, SignificanceResult | None] = {"i3": None, "pr6": None}
        if unit_scores:
            marks["i3"] = z_test_expectation(unit_scores, i3_scheme, alpha=alpha, unit_id=unit)
            marks["pr6"] = z_test_expectation(unit_scores, PR6, alpha=alpha, unit_id=unit)
        significance[unit] = marks

    metadata = {
        "counting_rule": rule,
        "i3_scheme": i3_scheme.name,
        "pr6_scheme": PR6.name,
        "ei_scheme": f"EI{ei_top:g}",
        "alpha": alpha,
        "census_year": corpus.census_year,
        "significance_test": "mean-weight z-test against the uniform-percentile null",
        "excluded_records": dict(sorted(scores.excluded.items())),
    }
    if run_config is not None:
        metadata["run_config"] = dict(run_config)
    return build_report(unit_indicators, significance, metadata, value_label=value_label)


# --- curve exports ----------------------------------------------------------


def export_citation_curve(records: Sequence[PublicationRecord]) -> list[tuple[int, int]]:
    """Citation counts by descending rank; the series sums to the unit's
    total citations exactly (the area under the curve)."""
    ordered = sorted(records, key=lambda r: (-r.citations, r.paper_id))
    return [(rank, rec.citations) for rank, rec in enumerate(ordered, start=1)]


def export_percentile_curve(
    scores: Sequence[PercentileScore | float],
) -> list[tuple[int, float]]:
    """Percentile values by descending rank; the series sums to the
    continuous-scheme integrated impact exactly."""
    keyed = [
        (s.value, s.paper_id) if isinstance(s, PercentileScore) else (float(s), "")
        for s in scores
    ]
    keyed.sort(key=lambda item: (-item[0], item[1]))
    return [(rank, value) for rank, (value, _) in enumerate(keyed, start=1)]


# --- rendering --------------------------------------------------------------


def _fmt_pct_cell(pct: float | None, rank: int | None, mark: str) -> str:
    if pct is None or rank is None:
        return "n/a"
    cell = f"{pct:.2f} [{rank}]"
    return f"{cell} {mark}" if mark else cell


def _fmt_value_cell(value: float | None, rank: int | None, label: str) -> str:
    if value is None or rank is None:
        return "n/a"
    decimals = 3 if label == "jif" else 2
    return f"{value:.{decimals}f} [{rank}]"


def _float_repr(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _metadata_line(report: IndicatorReport) -> str:
    return "# " + json.dumps(report.metadata, sort_keys=True, ensure_ascii=False, default=str)


def _render_csv(report: IndicatorReport) -> str:
    label = report.metadata.get("value_column", "cpp")
    header = [
        "unit_id",
        "n_papers",
        "total_citations",
        "i3",
        "pct_i3",
        "rank_i3",
        "mark_i3",
        "pr6",
        "pct_pr6",
        "rank_pr6",
        "mark_pr6",
        "ei",
        "rank_ei",
        label,
        f"rank_{label}",
    ]
    lines = [_metadata_line(report), ",".join(header)]
    for row in report.rows:
        value_str = "" if row.value is None else f"{row.value:.{3 if label == 'jif' else 2}f}"
        lines.append(
            ",".join(
                [
                    row.unit_id,
                    str(row.n_papers),
                    str(row.total_citations),
                    _float_repr(row.i3),
                    "" if row.pct_i3 is None else f"{row.pct_i3:.2f}",
                    str(row.rank_i3),
                    row.mark_i3,
                    _float_repr(row.pr6),
                    "" if row.pct_pr6 is None else f"{row.pct_pr6:.2f}",
                    str(row.rank_pr6),
                    row.mark_pr6,
                    _float_repr(row.ei),
                    str(row.rank_ei),
                    value_str,
                    "" if row.rank_value is None else str(row.rank_value),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _render_json(report: IndicatorReport) -> str:
    payload: dict = {"metadata": report.metadata, "rows": [asdict(row) for row in report.rows]}
    if report.curves is not None:
        payload["curves"] = {unit: list(series) for unit, series in report.curves.items()}
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False, default=str) + "\n"


def _render_text(report: IndicatorReport) -> str:
    label = report.metadata.get("value_column", "cpp").upper()
    header = ["Unit", "N papers", "N citations", "%I3", "%PR6", "EI", label]
    table = [header]
    for row in report.rows:
        ei_cell = f"{row.ei:g} [{row.rank_ei}]"
        table.append(
            [
                row.unit_id,
                f"{row.n_papers:,}",
                f"{row.total_citations:,}",
                _fmt_pct_cell(row.pct_i3, row.rank_i3, row.mark_i3),
                _fmt_pct_cell(row.pct_pr6, row.rank_pr6, row.mark_pr6),
                ei_cell,
                _fmt_value_cell(row.value, row.rank_value, label.lower()),
            ]
        )
    widths = [max(len(line[col]) for line in table) for col in range(len(header))]
    rendered = []
    for index, line in enumerate(table):
        rendered.append("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())
        if index == 0:
            rendered.append("  ".join("-" * width for width in widths))
    rendered.append("")
    rendered.append(_metadata_line(report))
    return "\n".join(rendered) + "\n"


_SVG_PALETTE = (
    "#1b6ca8",
    "#c0392b",
    "#27ae60",
    "#8e44ad",
    "#d35400",
    "#16a085",
    "#7f8c8d",
    "#2c3e50",
)


def render_curves_svg(
    curves: Mapping[str, Sequence[tuple[int, float]]],
    *,
    title: str = "impact curves",
    y_label: str = "value",
) -> str:
    """Static SVG figure: one polyline per unit, rank on x, value on y."""
    if not curves:
        raise DomainError("no curves to render")
    width, height = 840, 520
    left, right, top, bottom = 70, 180, 40, 50
    plot_w, plot_h = width - left - right, height - top - bottom
    max_rank = max(len(series) for series in curves.values())
    max_value = max((point[1] for series in curves.values() for point in series), default=1.0)
    max_rank = max(max_rank, 1)
    max_value = max(max_value, 1.0)

    def x_at(rank: int) -> float:
        return left + (rank - 1) / max(max_rank - 1, 1) * plot_w

    def y_at(value: float) -> float:
        return top + (1.0 - value / max_value) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<title>{title}</title>',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + plot_h}" stroke="black"/>',
        f'<line x1="{left}" y1="{top + plot_h}" x2="{left + plot_w}" y2="{top + plot_h}" '
        'stroke="black"/>',
        f'<text x="{left + plot_w / 2:.1f}" y="{height - 12}" text-anchor="middle" '
        f'font-size="13">rank</text>',
        f'<text x="18" y="{top + plot_h / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.1f})">{y_label}</text>',
        f'<text x="{left}" y="{y_at(max_value) - 6:.1f}" text-anchor="end" font-size="11">'
        f'{max_value:g}</text>',
        f'<text x="{left - 6}" y="{top + plot_h + 4}" text-anchor="end" font-size="11">0</text>',
    ]
    for index, unit in enumerate(sorted(curves)):
        series = curves[unit]
        color = _SVG_PALETTE[index % len(_SVG_PALETTE)]
        points = " ".join(f"{x_at(rank):.2f},{y_at(value):.2f}" for rank, value in series)
        parts.append(
            f'<polyline data-unit="{unit}" fill="none" stroke="{color}" stroke-width="1.5" '
            f'points="{points}"/>'
        )
        legend_y = top + 16 * index
        parts.append(
            f'<line x1="{width - right + 12}" y1="{legend_y}" x2="{width - right + 34}" '
            f'y2="{legend_y}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{width - right + 40}" y="{legend_y + 4}" font-size="12">{unit}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_curves_csv(curves: Mapping[str, Sequence[tuple[int, float]]]) -> str:
    lines = ["unit_id,rank,value"]
    for unit in sorted(curves):
        for rank, value in curves[unit]:
            lines.append(f"{unit},{rank},{value!r}")
    return "\n".join(lines) + "\n"


def render(report: IndicatorReport, fmt: str) -> bytes:
    """Serialize a report; deterministic bytes for identical input."""
    if fmt == "csv":
        text = _render_csv(report)
    elif fmt == "json":
        text = _render_json(report)
    elif fmt == "text-table":
        text = _render_text(report)
    elif fmt == "svg-curves":
        if report.curves is None:
            raise ConfigError("report carries no curves; run the curves pipeline first")
        text = render_curves_svg(report.curves, y_label=report.metadata.get("curve_kind", "value"))
    else:
        raise ConfigError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")
    return text.encode("utf-8")


def render_correlations(matrix: CorrelationMatrix, fmt: str) -> bytes:
    """Correlation table: rank correlations in the upper triangle, Pearson
    in the lower, significance stars at 0.05 (*) and 0.01 (**)."""

    def cell(i: int, j: int) -> str:
        if i == j:
            return ""
        if j > i:
            value, p = matrix.spearman[i][j], matrix.p_spearman[i][j]
        else:
            value, p = matrix.pearson[i][j], matrix.p_pearson[i][j]
        if value is None:
            return "undef"
        stars = CorrelationMatrix.stars(p)
        return f"{value:.3f}{' ' + stars if stars else ''}"

    names = matrix.indicator_names
    if fmt == "json":
        payload = {
            "indicator_names": names,
            "pearson": matrix.pearson,
            "spearman": matrix.spearman,
            "p_pearson": matrix.p_pearson,
            "p_spearman": matrix.p_spearman,
            "n": matrix.n,
        }
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        lines = [
            f"# n={matrix.n}; upper triangle: rank correlation (rho); lower: pearson r; "
            "* p<0.05, ** p<0.01",
            "indicator," + ",".join(names),
        ]
        for i, name in enumerate(names):
            lines.append(name + "," + ",".join(cell(i, j) for j in range(len(names))))
        return ("\n".join(lines) + "\n").encode("utf-8")
    if fmt == "text-table":
        table = [["indicator", *names]]
        for i, name in enumerate(names):
            table.append([name, *(cell(i, j) for j in range(len(names)))])
        widths = [max(len(row[c]) for row in table) for c in range(len(table[0]))]
        out = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in table]
        out.append(f"n={matrix.n}; upper: rho, lower: r; * p<0.05, ** p<0.01")
        return ("\n".join(out) + "\n").encode("utf-8")
    raise ConfigError(f"unknown correlation format {fmt!r}")
