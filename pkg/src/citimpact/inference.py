"""Significance tests against expectation and correlation analysis.

The default test compares a unit's mean per-paper class weight with its
analytic expectation under the null model of percentiles uniform on
[0, 100]. For the six-rank scheme the null moments follow from the class
widths:

    mu0   = 0.50*1 + 0.25*2 + 0.15*3 + 0.05*4 + 0.04*5 + 0.01*6 = 1.91
    E[w2] = 0.50*1 + 0.25*4 + 0.15*9 + 0.05*16 + 0.04*25 + 0.01*36 = 5.01
    var0  = 5.01 - 1.91**2 = 1.3619

and for the continuous scheme mu0 = 50, var0 = 100**2/12. A two-proportion
test on the top-x% share is available as an alternative mode; every result
records which mode produced it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from scipy.special import stdtr

from .errors import ConfigError, DomainError, UndefinedIndicatorError
from .refsets import PercentileScore
from .schemes import RankClassScheme

DEFAULT_ALPHA = 0.01

MEAN_WEIGHT_TEST = "mean-weight"
TOP_SHARE_TEST = "top-share"


@dataclass(frozen=True)
class SignificanceResult:
    unit_id: str
    indicator: str  # scheme or share the test was run on, e.g. "PR6"
    z: float
    p_two_sided: float
    direction: str  # "above" | "below" | "none"
    alpha: float
    n: int
    test: str = MEAN_WEIGHT_TEST
    versus: str | None = None  # set for two-unit comparisons

    @property
    def mark(self) -> str:
        """Table mark: superscript plus/minus for significant deviations."""
        return {"above": "⁺", "below": "⁻"}.get(self.direction, "")


def normal_cdf(z: float) -> float:
    """Standard normal CDF via erf; accurate to well below 1e-7."""
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def scheme_null_moments(scheme: RankClassScheme) -> tuple[float, float]:
    """(mu0, sigma0) of the per-paper weight when percentiles are uniform."""
    if scheme.continuous:
        return 50.0, 100.0 / math.sqrt(12.0)
    # divide by the full range once at the end: for PR6 this yields the exact
    # doubles 191/100 and 501/100 for the first two moments
    mean = math.fsum(c.weight * (c.upper - c.lower) for c in scheme.classes) / 100.0
    second = math.fsum(c.weight**2 * (c.upper - c.lower) for c in scheme.classes) / 100.0
    variance = second - mean * mean
    if variance <= 1e-15:
        raise DomainError(
            f"scheme {scheme.name!r} has zero weight variance under the null; "
            "the z-test is undefined for degenerate schemes"
        )
    return mean, math.sqrt(variance)


def _mean_weight(scores: Sequence[PercentileScore | float], scheme: RankClassScheme) -> float:
    weights = [
        scheme.weight_of(s.value if isinstance(s, PercentileScore) else float(s)) for s in scores
    ]
    return math.fsum(weights) / len(weights)


def _direction(z: float, p: float, alpha: float) -> str:
    if p < alpha:
        return "above" if z > 0 else "below"
    return "none"


def z_test_expectation(
    scores: Sequence[PercentileScore | float],
    scheme: RankClassScheme,
    *,
    alpha: float = DEFAULT_ALPHA,
    unit_id: str = "",
) -> SignificanceResult:
    """One-sample z: is the unit's mean per-paper weight above or below the
    uniform-percentile expectation?  z = (mean - mu0) / (sigma0 / sqrt(n))."""
    n = len(scores)
    if n == 0:
        raise UndefinedIndicatorError(f"z-test undefined for empty unit {unit_id!r}")
    mu0, sigma0 = scheme_null_moments(scheme)
    observed = _mean_weight(scores, scheme)
    z = (observed - mu0) / (sigma0 / math.sqrt(n))
    p = 2.0 * normal_sf(abs(z))
    return SignificanceResult(
        unit_id=unit_id,
        indicator=scheme.name,
        z=z,
        p_two_sided=p,
        direction=_direction(z, p, alpha),
        alpha=alpha,
        n=n,
    )


def z_test_two_units(
    scores_a: Sequence[PercentileScore | float],
    scores_b: Sequence[PercentileScore | float],
    scheme: RankClassScheme,
    *,
    alpha: float = DEFAULT_ALPHA,
    unit_a: str = "A",
    unit_b: str = "B",
) -> SignificanceResult:
    """Two-sample z on mean per-paper weights with pooled null variance
    sigma0^2 * (1/n_a + 1/n_b); direction is unit A relative to unit B."""
    if not scores_a or not scores_b:
        raise UndefinedIndicatorError("two-unit z-test undefined when either unit is empty")
    mu0, sigma0 = scheme_null_moments(scheme)
    del mu0  # the null mean cancels in the difference
    n_a, n_b = len(scores_a), len(scores_b)
    diff = _mean_weight(scores_a, scheme) - _mean_weight(scores_b, scheme)
    z = diff / (sigma0 * math.sqrt(1.0 / n_a + 1.0 / n_b))
    p = 2.0 * normal_sf(abs(z))
    return SignificanceResult(
        unit_id=unit_a,
        indicator=scheme.name,
        z=z,
        p_two_sided=p,
        direction=_direction(z, p, alpha),
        alpha=alpha,
        n=n_a + n_b,
        versus=unit_b,
    )


def _top_share(scores: Sequence[PercentileScore | float], top_percent: float) -> float:
    threshold = 100.0 - top_percent
    hits = sum(
        1 for s in scores if (s.value if isinstance(s, PercentileScore) else float(s)) >= threshold
    )
    return hits / len(scores)


def z_test_top_share(
    scores: Sequence[PercentileScore | float],
    top_percent: float = 10.0,
    *,
    alpha: float = DEFAULT_ALPHA,
    unit_id: str = "",
) -> SignificanceResult:
    """Alternative mode: one-sample proportion test of the unit's top-x%
    share against the null share x/100."""
    if not 0.0 < top_percent < 100.0:
        raise DomainError(f"top percentage must lie in (0, 100), got {top_percent}")
    n = len(scores)
    if n == 0:
        raise UndefinedIndicatorError(f"top-share test undefined for empty unit {unit_id!r}")
    p0 = top_percent / 100.0
    observed = _top_share(scores, top_percent)
    z = (observed - p0) / math.sqrt(p0 * (1.0 - p0) / n)
    p = 2.0 * normal_sf(abs(z))
    return SignificanceResult(
        unit_id=unit_id,
        indicator=f"top-{top_percent:g}% share",
        z=z,
        p_two_sided=p,
        direction=_direction(z, p, alpha),
        alpha=alpha,
        n=n,
        test=TOP_SHARE_TEST,
    )


def z_test_top_share_two_units(
    scores_a: Sequence[PercentileScore | float],
    scores_b: Sequence[PercentileScore | float],
    top_percent: float = 10.0,
    *,
    alpha: float = DEFAULT_ALPHA,
    unit_a: str = "A",
    unit_b: str = "B",
) -> SignificanceResult:
    """Two-proportion z-test on top-x% shares with a pooled estimate."""
    if not 0.0 < top_percent < 100.0:
        raise DomainError(f"top percentage must lie in (0, 100), got {top_percent}")
    if not scores_a or not scores_b:
        raise UndefinedIndicatorError("two-unit top-share test undefined when either unit is empty")
    n_a, n_b = len(scores_a), len(scores_b)
    share_a = _top_share(scores_a, top_percent)
    share_b = _top_share(scores_b, top_percent)
    pooled = (share_a * n_a + share_b * n_b) / (n_a + n_b)
    denom = pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b)
    if denom == 0.0:
        z = 0.0  # both shares identical at 0 or 1: no evidence either way
    else:
        z = (share_a - share_b) / math.sqrt(denom)
    p = 2.0 * normal_sf(abs(z))
    return SignificanceResult(
        unit_id=unit_a,
        indicator=f"top-{top_percent:g}% share",
        z=z,
        p_two_sided=p,
        direction=_direction(z, p, alpha),
        alpha=alpha,
        n=n_a + n_b,
        test=TOP_SHARE_TEST,
        versus=unit_b,
    )


# --- correlations -----------------------------------------------------------


def midranks(values: Sequence[float]) -> list[float]:
    """1-based ranks with ties assigned the average of their positions."""
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j < n and values[order[j]] == values[order[i]]:
            j += 1
        rank = (i + 1 + j) / 2.0  # mean of positions i+1 .. j
        for k in range(i, j):
            ranks[order[k]] = rank
        i = j
    return ranks


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Pearson r, or None when either side is constant (undefined)."""
    n = len(xs)
    mean_x = math.fsum(xs) / n
    mean_y = math.fsum(ys) / n
    dx = [x - mean_x for x in xs]
    dy = [y - mean_y for y in ys]
    ss_x = math.fsum(d * d for d in dx)
    ss_y = math.fsum(d * d for d in dy)
    if ss_x == 0.0 or ss_y == 0.0:
        return None
    r = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(ss_x * ss_y)
    return max(-1.0, min(1.0, r))


def _t_pvalue(r: float, n: int) -> float:
    """Two-sided p for a correlation via the t-approximation, n-2 df."""
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return 2.0 * float(stdtr(n - 2, -abs(t)))


@dataclass
class CorrelationMatrix:
    """Pearson and rank-order correlations over per-unit indicator columns.

    Cells are None where the correlation is undefined (constant column);
    diagonals are exactly 1 by identity.
    """

    indicator_names: list[str]
    pearson: list[list[float | None]]
    spearman: list[list[float | None]]
    p_pearson: list[list[float | None]]
    p_spearman: list[list[float | None]]
    n: int

    @staticmethod
    def stars(p: float | None) -> str:
        if p is None:
            return ""
        if p < 0.01:
            return "**"
        if p < 0.05:
            return "*"
        return ""


def correlations(values: Mapping[str, Sequence[float]]) -> CorrelationMatrix:
    """Correlate indicator columns across units.

    ``values`` maps indicator name to a per-unit column; all columns must be
    aligned (same unit order) and at least 3 units long. Rank correlation is
    Pearson on midranks (average ranks for ties); p-values use the
    t-approximation with n-2 degrees of freedom.
    """
    names = list(values)
    if len(names) < 2:
        raise DomainError("need at least two indicator columns to correlate")
    columns = [list(values[name]) for name in names]
    n = len(columns[0])
    if any(len(col) != n for col in columns):
        raise DomainError("indicator columns must have equal length")
    if n < 3:
        raise DomainError(f"need at least 3 units to correlate, got {n}")
    for name, col in zip(names, columns):
        for v in col:
            if v is None or not math.isfinite(v):
                raise DomainError(f"indicator column {name!r} contains an undefined entry")

    k = len(names)
    ranked = [midranks(col) for col in columns]
    r_matrix: list[list[float | None]] = [[None] * k for _ in range(k)]
    rho_matrix: list[list[float | None]] = [[None] * k for _ in range(k)]
    pr_matrix: list[list[float | None]] = [[None] * k for _ in range(k)]
    ps_matrix: list[list[float | None]] = [[None] * k for _ in range(k)]
    for i in range(k):
        r_matrix[i][i] = 1.0
        rho_matrix[i][i] = 1.0
        for j in range(i + 1, k):
            r = pearson(columns[i], columns[j])
            rho = pearson(ranked[i], ranked[j])
            r_matrix[i][j] = r_matrix[j][i] = r
            rho_matrix[i][j] = rho_matrix[j][i] = rho
            p_r = None if r is None else _t_pvalue(r, n)
            p_rho = None if rho is None else _t_pvalue(rho, n)
            pr_matrix[i][j] = pr_matrix[j][i] = p_r
            ps_matrix[i][j] = ps_matrix[j][i] = p_rho
    return CorrelationMatrix(
        indicator_names=names,
        pearson=r_matrix,
        spearman=rho_matrix,
        p_pearson=pr_matrix,
        p_spearman=ps_matrix,
        n=n,
    )
