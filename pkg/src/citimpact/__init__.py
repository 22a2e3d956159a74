"""Non-parametric citation impact indicators.

Citation distributions are heavily skewed, so averages such as the journal
impact factor are dominated by a few highly cited papers. This package
scores every paper as a percentile within its reference set (venue scope,
publication year, document type) and aggregates the percentiles into
indicators that use the whole distribution: the integrated impact
indicator (I3), six-class percentile ranks (PR6) and excellence shares
(EI), next to the classical averages kept for comparison, plus
significance tests, correlation analysis, reporting and a seeded
generator for synthetic skewed corpora.
"""

from .corpus import (
    CITABLE_DOC_TYPES,
    Corpus,
    DocType,
    PublicationRecord,
    REQUIRED_COLUMNS,
    corpus_csv_text,
    group_by_unit,
    load_corpus,
    save_corpus,
)
from .errors import (
    CitimpactError,
    ConfigError,
    DomainError,
    DuplicateIdError,
    RowValidationError,
    SchemaError,
    UndefinedIndicatorError,
)
from .indicators import (
    Indicator,
    IndicatorValue,
    classify,
    cpp,
    excellence_indicator,
    i3,
    jif,
    mncs,
    pr6,
    rcr,
    total_citations,
)
from .inference import (
    CorrelationMatrix,
    DEFAULT_ALPHA,
    SignificanceResult,
    correlations,
    midranks,
    pearson,
    scheme_null_moments,
    z_test_expectation,
    z_test_top_share,
    z_test_top_share_two_units,
    z_test_two_units,
)
from .kernels import BACKEND, COUNTING_RULES, class_counts, percentile_values
from .refsets import (
    DEFAULT_RULE,
    PercentileScore,
    ReferenceSetKey,
    ReferenceSets,
    ScopeConfig,
    UnitScores,
    build_reference_sets,
    export_scores_csv,
    percentile_scores,
    unit_percentiles,
)
from .reporting import (
    IndicatorReport,
    ReportRow,
    build_report,
    export_citation_curve,
    export_percentile_curve,
    full_report,
    render,
    render_correlations,
    render_curves_csv,
    render_curves_svg,
)
from .schemes import (
    BOUNDARY_CONVENTION,
    CONTINUOUS,
    PR6,
    RankClass,
    RankClassScheme,
    excellence_scheme,
    load_scheme_file,
    named_scheme,
)
from .synthgen import (
    DilutionResult,
    GeneratorSpec,
    SplitMix64,
    dilution_experiment,
    dilution_on_corpus,
    generate,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BOUNDARY_CONVENTION",
    "CITABLE_DOC_TYPES",
    "CONTINUOUS",
    "COUNTING_RULES",
    "CitimpactError",
    "ConfigError",
    "CorrelationMatrix",
    "Corpus",
    "DEFAULT_ALPHA",
    "DEFAULT_RULE",
    "DilutionResult",
    "DocType",
    "DomainError",
    "DuplicateIdError",
    "GeneratorSpec",
    "Indicator",
    "IndicatorReport",
    "IndicatorValue",
    "PR6",
    "PercentileScore",
    "PublicationRecord",
    "RankClass",
    "RankClassScheme",
    "REQUIRED_COLUMNS",
    "ReferenceSetKey",
    "ReferenceSets",
    "ReportRow",
    "RowValidationError",
    "SchemaError",
    "ScopeConfig",
    "SignificanceResult",
    "SplitMix64",
    "UndefinedIndicatorError",
    "UnitScores",
    "build_reference_sets",
    "build_report",
    "class_counts",
    "classify",
    "corpus_csv_text",
    "correlations",
    "cpp",
    "dilution_experiment",
    "dilution_on_corpus",
    "excellence_indicator",
    "excellence_scheme",
    "export_citation_curve",
    "export_percentile_curve",
    "export_scores_csv",
    "full_report",
    "generate",
    "group_by_unit",
    "i3",
    "jif",
    "load_corpus",
    "load_scheme_file",
    "midranks",
    "mncs",
    "named_scheme",
    "pearson",
    "percentile_scores",
    "percentile_values",
    "pr6",
    "rcr",
    "render",
    "render_correlations",
    "render_curves_csv",
    "render_curves_svg",
    "save_corpus",
    "scheme_null_moments",
    "total_citations",
    "unit_percentiles",
    "z_test_expectation",
    "z_test_top_share",
    "z_test_top_share_two_units",
    "z_test_two_units",
]
