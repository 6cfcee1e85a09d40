"""
派生指标测试
"""
import math

import pytest

from application.common.constants import TierEnum
from application.common.exception import (
    EmptyConfig,
    MetricsInputError,
    NonPositiveVG,
    PartialResultsRefused,
    ZeroReferenceError,
)
from application.common.schema import AccuracyTable, EvalRecord
from application.service import metrics_service as metrics
from application.service.metrics_service import default_corrupted_slugs, metrics_service


def rec(sample_id, config, correct, status="ok", stratum="general"):
    return EvalRecord(
        sample_id=sample_id,
        config=config,
        answer="A",
        stratum=stratum,
        extracted="A" if correct else "B",
        correct=correct,
        status=status,
    )


def records(config, pattern, strata=None):
    return [
        rec(f"s{i}", config, ok, stratum=(strata[i] if strata else "general"))
        for i, ok in enumerate(pattern)
    ]


def uniform_table(model, acc_clean, value, acc_noimage=None):
    return AccuracyTable(
        model=model,
        dataset="synthetic",
        acc_clean=acc_clean,
        acc_noimage=acc_noimage,
        acc={slug: value for slug in default_corrupted_slugs()},
    )


# ============================
#        准确率与翻转
# ============================

def test_accuracy():
    assert metrics.accuracy(records("clean", [True, True, True, False])) == 75.0
    with pytest.raises(EmptyConfig):
        metrics.accuracy([])


def test_accuracy_with_failed_records():
    rows = records("clean", [True, False]) + [rec("s9", "clean", False, status="failed")]
    with pytest.raises(PartialResultsRefused) as exc_info:
        metrics.accuracy(rows)
    assert exc_info.value.exit_code == 3
    assert metrics.accuracy(rows, allow_partial=True) == 50.0


def test_flip_net_equals_drop():
    clean = records("clean", [True, True, False, False, True])
    corrupted = records("blur:low", [False, True, True, False, False])
    stats = metrics.flip_stats(clean, corrupted)
    assert (stats.n_plus, stats.n_minus, stats.n) == (2, 1, 5)
    assert stats.flip_plus == 40.0
    assert stats.flip_minus == 20.0
    assert stats.net == metrics.accuracy(clean) - metrics.accuracy(corrupted) == 20.0
    assert metrics.flip_ratio(stats) == 2.0
    assert metrics.flip_rate(clean, corrupted) == pytest.approx(200.0 / 3)


def test_flip_requires_same_samples():
    with pytest.raises(MetricsInputError):
        metrics.flip_stats(records("clean", [True, True]), records("x", [True]))


def test_flip_ratio_undefined_without_recoveries():
    stats = metrics.flip_stats(records("clean", [True]), records("x", [False]))
    assert metrics.flip_ratio(stats) is None


# ============================
#        分档
# ============================

@pytest.mark.parametrize("drop, expected", [
    (-0.1, TierEnum.POSITIVE),
    (0.0, TierEnum.BENIGN),
    (1.0, TierEnum.BENIGN),
    (1.01, TierEnum.MILD),
    (3.0, TierEnum.MILD),
    (3.01, TierEnum.MODERATE),
    (10.0, TierEnum.MODERATE),
    (10.01, TierEnum.CATASTROPHIC),
])
def test_tier_boundaries(drop, expected):
    assert metrics.tier(drop) == expected


def test_tier_counts_partition():
    drops = {"a:low": -2.0, "b:low": 0.5, "c:mid": 2.0, "d:high": 7.0, "e": 25.0, "f": 0.0}
    counts = metrics.tier_counts(drops)
    assert sum(counts.values()) == len(drops)
    assert counts == {"positive": 1, "benign": 2, "mild": 1, "moderate": 1, "catastrophic": 1}
    folded = metrics.tier_counts(drops, fold_positive=True)
    assert "positive" not in folded and folded["benign"] == 3
    assert sum(metrics.tier_shares(drops).values()) == pytest.approx(100.0)


def test_top_k_and_positive_configs():
    drops = {"a:low": 3.0, "b:low": 5.0, "c:low": 5.0, "d:low": -1.0, "e": 2.0}
    top = metrics.top_k_by_severity(drops, k=2)
    assert top["low"] == [("b:low", 5.0), ("c:low", 5.0)]
    assert top["binary"] == [("e", 2.0)]
    assert top["high"] == []
    assert metrics.positive_configs(drops) == ["d:low"]


# ============================
#        严重程度一致性
# ============================

def test_severity_mismatch_inverted_trajectory():
    assert metrics.monotonicity_violation(6.96, 5.59, 4.10)
    assert metrics.spearman_rho(6.96, 5.59, 4.10) == pytest.approx(-1.0)


@pytest.mark.parametrize("triple, violation, rho", [
    ((1.0, 2.0, 3.0), False, 1.0),
    ((1.0, 3.0, 3.0), False, math.sqrt(3) / 2),
    ((2.0, 1.0, 3.0), True, 0.5),
    ((2.0, 2.0, 2.0), False, None),
])
def test_severity_trajectories(triple, violation, rho):
    assert metrics.monotonicity_violation(*triple) == violation
    got = metrics.spearman_rho(*triple)
    if rho is None:
        assert got is None
    else:
        assert got == pytest.approx(rho)


def test_severity_mismatch_summary():
    drops = {
        "glass_blur:low": 6.96, "glass_blur:mid": 5.59, "glass_blur:high": 4.10,
        "gaussian_blur:low": 1.0, "gaussian_blur:mid": 2.0, "gaussian_blur:high": 3.0,
        "defocus_blur:low": 1.0, "defocus_blur:mid": 1.0, "defocus_blur:high": 1.0,
    }
    rows = metrics.severity_mismatch_rows(drops)
    assert {r.aug_id for r in rows} == {"glass_blur", "gaussian_blur", "defocus_blur"}
    summary = metrics.severity_mismatch_summary(rows)
    assert summary["violation_rate"] == pytest.approx(100.0 / 3)
    assert summary["mean_rho"] == pytest.approx(0.0)
    assert summary["undefined_rho"] == 1


# ============================
#        汇总指标
# ============================

def test_severe_failure_rate_rendering():
    slugs = default_corrupted_slugs()
    drops = {slug: (20.0 if i < 13 else 0.0) for i, slug in enumerate(slugs)}
    rate = metrics.severe_failure_rate(drops, acc_clean=80.0)
    assert rate == pytest.approx(1300.0 / 133)
    assert f"{rate:.1f}" == "9.8"


def test_severe_failure_threshold_is_strict():
    assert metrics.severe_failure_rate({"a": 8.0, "b": 8.01}, acc_clean=80.0) == 50.0


def test_rce_and_visual_gain():
    vg = metrics.visual_gain(80.0, 40.0)
    assert vg == 40.0
    assert metrics.rce(vg, vg) == 100.0
    assert metrics.rce(4.0, vg) == 10.0
    with pytest.raises(NonPositiveVG):
        metrics.rce(1.0, 0.0)


def test_worst_case_tie_takes_first():
    assert metrics.worst_case({"a:low": 3.0, "b:low": 3.0, "c:mid": 1.0}) == ("a:low", 3.0)
    assert metrics.worst_at_low({"a:low": 1.0, "z:high": 9.0}) == ("a:low", 1.0)
    assert metrics.benign_at_low({"a:low": 1.0, "b:low": 1.5, "c:high": 0.0}) == 50.0


def test_mce_reference_is_100():
    ref = metrics.mce_inputs(uniform_table("ref", 60.0, 50.0))
    model = metrics.mce_inputs(uniform_table("better", 90.0, 75.0))
    assert len(ref.error_sums) == 49
    assert metrics.mce(ref, ref) == pytest.approx(100.0)
    assert metrics.mce(model, ref) == pytest.approx(50.0)
    by_category = metrics.mce_by_category(model, ref)
    assert by_category["all"] == pytest.approx(50.0)
    assert by_category["binary"] == pytest.approx(50.0)


def test_mce_zero_reference():
    ref = metrics.mce_inputs(uniform_table("perfect", 100.0, 100.0))
    model = metrics.mce_inputs(uniform_table("other", 90.0, 80.0))
    with pytest.raises(ZeroReferenceError):
        metrics.mce(model, ref)


def test_reference_model():
    assert metrics.reference_model({"a": 70.0, "b": 60.0, "c": 60.0}) == "b"
    assert metrics.reference_model({"a": 70.0, "b": 60.0}, override="a") == "a"
    with pytest.raises(MetricsInputError):
        metrics.reference_model({"a": 70.0}, override="missing")


def test_scaling_slope():
    slope, r2 = metrics.scaling_slope([(1e9, 5.0), (1e10, 3.0), (1e11, 1.0)])
    assert slope == pytest.approx(-2.0)
    assert r2 == pytest.approx(1.0)
    slope, r2 = metrics.scaling_slope([(1e9, 5.0), (1e10, 4.0), (1e11, 0.0)])
    assert slope == pytest.approx(-2.5)
    assert r2 == pytest.approx(25.0 / 28.0)
    assert metrics.scaling_slope([(1e9, 2.0), (1e10, 2.0)]) == (pytest.approx(0.0), 1.0)
    with pytest.raises(MetricsInputError):
        metrics.scaling_slope([(1e9, 5.0)])


def test_tail_risk_share():
    assert metrics.tail_risk_share(["rotate:high", "gaussian_noise:high"]) == 50.0
    assert metrics.tail_risk_share([]) is None


def test_category_sensitivity_orders_by_drop():
    strata = ["x", "x", "y", "y"]
    clean = records("clean", [True, True, True, True], strata)
    corrupted = {
        "a:low": records("a:low", [True, True, False, False], strata),
        "b:low": records("b:low", [False, True, False, True], strata),
    }
    result = metrics.category_sensitivity(clean, corrupted)
    assert list(result) == ["y", "x"]
    assert result == {"y": 75.0, "x": 25.0}


# ============================
#        报告
# ============================

def test_all_correct_table_report():
    table = uniform_table("perfect", 100.0, 100.0, acc_noimage=40.0)
    report = metrics_service.compute_report(table)
    assert set(report.drops.values()) == {0.0}
    assert report.visual_gain == 60.0
    assert report.mrce == 0.0
    assert report.severe_failure_rate == 0.0
    assert report.benign_at_low == 100.0
    assert report.worst_case == (default_corrupted_slugs()[0], 0.0)
    assert report.tail_risk_share is None
    assert not report.partial
    for counts in report.tiers.values():
        assert set(k for k, v in counts.items() if v) == {"benign"}
    assert sum(sum(c.values()) for c in report.tiers.values()) == 133


def test_drops_use_counts_when_available():
    table = AccuracyTable(
        model="m", dataset="d", acc_clean=100 * 2 / 3, acc={"a:low": 100 / 3},
        n=3, correct={"clean": 2, "a:low": 1},
    )
    assert metrics_service.drops(table) == {"a:low": 100 / 3}


def test_partial_table_skips_mrce():
    table = AccuracyTable(model="m", dataset="d", acc_clean=80.0, acc_noimage=40.0, acc={"glass_blur:low": 70.0})
    report = metrics_service.compute_report(table)
    assert report.partial
    assert report.mrce is None
    assert report.withheld == ["mrce"]
    assert report.rce == {"glass_blur:low": 25.0}
    relaxed = metrics_service.compute_report(table, allow_partial=True)
    assert relaxed.mrce == 25.0
    assert relaxed.withheld == []
