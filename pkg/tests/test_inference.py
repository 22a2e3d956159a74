"""Significance tests against the uniform-percentile null and correlations."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from citimpact import (
    CONTINUOUS,
    CorrelationMatrix,
    DomainError,
    PR6,
    UndefinedIndicatorError,
    correlations,
    midranks,
    pearson,
    scheme_null_moments,
    z_test_expectation,
    z_test_top_share,
    z_test_top_share_two_units,
    z_test_two_units,
)
from citimpact.synthgen import SplitMix64


def test_pr6_null_moments_analytic():
    mu0, sigma0 = scheme_null_moments(PR6)
    assert math.isclose(mu0, 1.91, abs_tol=1e-12)
    second_moment = sigma0**2 + mu0**2
    assert math.isclose(second_moment, 5.01, abs_tol=1e-12)
    assert math.isclose(sigma0**2, 1.3619, abs_tol=1e-12)
    assert math.isclose(sigma0, 1.1670, abs_tol=5e-5)


def test_continuous_null_moments():
    mu0, sigma0 = scheme_null_moments(CONTINUOUS)
    assert mu0 == 50.0
    assert math.isclose(sigma0, 100.0 / math.sqrt(12.0), rel_tol=1e-12)
    assert math.isclose(sigma0, 28.8675, abs_tol=5e-5)


def test_degenerate_scheme_rejected():
    from citimpact import RankClass, RankClassScheme

    flat = RankClassScheme("flat", (RankClass(0, 100, 3.0),))
    with pytest.raises(DomainError):
        scheme_null_moments(flat)


def test_zero_z_at_null_mean():
    # mean PR6 weight exactly 1.91: weights 1 and 2 in proportion 9:91 -> 1.91
    scores = [25.0] * 9 + [60.0] * 91
    mean_weight = (9 * 1 + 91 * 2) / 100
    assert mean_weight == 1.91
    result = z_test_expectation(scores, PR6)
    assert result.z == 0.0
    assert result.direction == "none"
    assert result.mark == ""


def test_continuous_all_at_50_gives_zero():
    assert z_test_expectation([50.0] * 12, CONTINUOUS).z == 0.0


def test_empty_unit_undefined():
    with pytest.raises(UndefinedIndicatorError):
        z_test_expectation([], PR6)
    with pytest.raises(UndefinedIndicatorError):
        z_test_two_units([], [50.0], PR6)


def test_z_grows_as_sqrt_n():
    base = [99.5] * 10
    z1 = z_test_expectation(base, PR6).z
    z4 = z_test_expectation(base * 4, PR6).z
    assert math.isclose(z4, 2.0 * z1, rel_tol=1e-12)


def test_two_unit_antisymmetry_and_identity(pi1_mids, pi2_mids):
    ab = z_test_two_units(pi1_mids, pi2_mids, PR6)
    ba = z_test_two_units(pi2_mids, pi1_mids, PR6)
    assert math.isclose(ab.z, -ba.z, rel_tol=1e-12)
    same = z_test_two_units(pi2_mids, list(pi2_mids), PR6)
    assert same.z == 0.0 and same.direction == "none"


def test_table1_units_significantly_different(pi1_mids, pi2_mids):
    result = z_test_two_units(pi1_mids, pi2_mids, PR6, alpha=0.05, unit_a="PI1", unit_b="PI2")
    assert result.p_two_sided < 0.05
    assert math.isclose(result.z, 3.3523, abs_tol=5e-4)
    assert result.direction == "above"
    assert result.mark == "⁺"
    assert result.versus == "PI2"


def test_one_sample_marks(pi1_mids):
    above = z_test_expectation(pi1_mids, PR6, alpha=0.01)
    assert above.direction == "above" and above.mark == "⁺"
    below = z_test_expectation([25.0] * 200, PR6, alpha=0.01)
    assert below.direction == "below" and below.mark == "⁻"


def test_top_share_tests():
    scores = [99.0] * 5 + [10.0] * 5  # 50% in the top decile
    one = z_test_top_share(scores, 10.0)
    assert one.z > 0 and one.test == "top-share"
    both = z_test_top_share_two_units(scores, scores, 10.0)
    assert both.z == 0.0
    flat = z_test_top_share_two_units([10.0] * 4, [20.0] * 4, 10.0)
    assert flat.z == 0.0  # pooled share 0: no evidence either way
    with pytest.raises(DomainError):
        z_test_top_share(scores, 0.0)


def test_null_unit_rarely_significant_montecarlo():
    # z on a unit sampled from the null should stay inside +-2.58 almost always
    rng = SplitMix64(0xD1CE)
    hits = 0
    trials = 400
    for _ in range(trials):
        scores = [100.0 * rng.random() for _ in range(50)]
        if abs(z_test_expectation(scores, PR6).z) < 2.58:
            hits += 1
    assert hits / trials >= 0.98


def test_midranks_with_ties():
    assert midranks([10.0, 20.0, 20.0, 30.0]) == [1.0, 2.5, 2.5, 4.0]
    assert midranks([5.0, 5.0, 5.0]) == [2.0, 2.0, 2.0]


def test_pearson_basic():
    assert pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]) == 1.0
    assert pearson([1.0, 2.0, 3.0], [6.0, 4.0, 2.0]) == -1.0
    assert pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) is None


def test_hand_computed_rank_correlation():
    matrix = correlations({"x": [1.0, 2.0, 3.0, 4.0], "y": [2.0, 1.0, 4.0, 3.0]})
    assert math.isclose(matrix.spearman[0][1], 0.6, abs_tol=1e-12)


def test_monotone_transform_rank_rho_1():
    xs = [1.0, 2.0, 5.0, 9.0, 13.0]
    ys = [math.exp(x / 4) for x in xs]
    matrix = correlations({"x": xs, "y": ys})
    assert matrix.spearman[0][1] == 1.0
    assert matrix.pearson[0][1] < 1.0
    assert matrix.p_spearman[0][1] == 0.0


def test_self_correlation_is_one():
    xs = [3.0, 1.0, 4.0, 1.5, 9.0]
    matrix = correlations({"a": xs, "b": list(xs)})
    assert matrix.pearson[0][1] == 1.0
    assert matrix.spearman[0][1] == 1.0
    assert matrix.pearson[0][0] == matrix.spearman[1][1] == 1.0


def test_constant_column_reported_undefined_not_nan():
    matrix = correlations({"a": [1.0, 2.0, 3.0], "b": [7.0, 7.0, 7.0]})
    assert matrix.pearson[0][1] is None
    assert matrix.spearman[0][1] is None
    assert matrix.p_pearson[0][1] is None
    assert matrix.pearson[1][1] == 1.0  # diagonal stays defined


def test_correlation_matrix_symmetry_and_bounds():
    rng = random.Random(11)
    cols = {name: [rng.uniform(0, 50) for _ in range(30)] for name in ("a", "b", "c")}
    matrix = correlations(cols)
    k = len(matrix.indicator_names)
    for i in range(k):
        for j in range(k):
            assert matrix.pearson[i][j] == matrix.pearson[j][i]
            assert matrix.spearman[i][j] == matrix.spearman[j][i]
            assert -1.0 <= matrix.pearson[i][j] <= 1.0


def test_correlations_input_errors():
    with pytest.raises(DomainError):
        correlations({"only": [1.0, 2.0, 3.0]})
    with pytest.raises(DomainError):
        correlations({"a": [1.0, 2.0], "b": [1.0, 2.0, 3.0]})
    with pytest.raises(DomainError):
        correlations({"a": [1.0, 2.0], "b": [2.0, 1.0]})
    with pytest.raises(DomainError):
        correlations({"a": [1.0, 2.0, None], "b": [1.0, 2.0, 3.0]})


def test_stars_thresholds():
    assert CorrelationMatrix.stars(0.009) == "**"
    assert CorrelationMatrix.stars(0.03) == "*"
    assert CorrelationMatrix.stars(0.2) == ""
    assert CorrelationMatrix.stars(None) == ""


def test_p_value_t_approximation_sanity():
    # strong correlation on a short column should still be significant
    matrix = correlations({"x": [1.0, 2.0, 3.0, 4.0, 5.0], "y": [1.1, 2.0, 3.2, 3.9, 5.1]})
    assert matrix.p_pearson[0][1] < 0.01


@given(
    st.lists(st.floats(min_value=-100, max_value=100, allow_nan=False), min_size=3, max_size=40),
    st.integers(min_value=1, max_value=5),
)
@settings(max_examples=100)
def test_spearman_invariant_under_increasing_transform(xs, k):
    ys = [x * k + 1 for x in xs]
    transformed = [math.tanh(x / 50) for x in xs]  # strictly increasing
    a = correlations({"x": xs, "y": ys})
    b = correlations({"x": transformed, "y": ys})
    sa, sb = a.spearman[0][1], b.spearman[0][1]
    if sa is None or sb is None:
        assert sa == sb
    else:
        assert math.isclose(sa, sb, abs_tol=1e-9)
