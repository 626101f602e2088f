import numpy as np
import pandas as pd
import pytest
from scipy.stats import norm

from eharqsim.metrics import (
    CurveSet,
    OperatingPoint,
    binormal_curve,
    confusion_at_threshold,
    curve_summary,
    fnr_fpr_curve,
    pr_curve_and_auc,
    threshold_for_target_fnr,
)

SCORES = [0.2, 0.6, 0.7, 0.9]
LABELS = [0, 0, 1, 1]


class TestConfusionAtThreshold:
    def test_separating(self):
        point = confusion_at_threshold(SCORES, LABELS, 0.65)

        assert (point.fn, point.fp, point.tp, point.tn) == (0, 0, 2, 2)

    def test_above_all(self):
        point = confusion_at_threshold(SCORES, LABELS, 0.95)

        assert point.fn == 2
        assert point.fnr == 1.0
        assert point.precision == 1.0

    def test_everything_positive(self):
        point = confusion_at_threshold(SCORES, LABELS, -np.inf)

        assert point.fpr == 1.0
        assert point.fnr == 0.0

    def test_at_threshold_is_positive(self):
        point = confusion_at_threshold(SCORES, LABELS, 0.7)

        assert point.tp == 2

    def test_labels(self):
        with pytest.raises(ValueError, match="must be 0"):
            confusion_at_threshold([0.1], [2], 0.5)

    def test_nan_scores(self):
        with pytest.raises(ValueError, match="NaN"):
            confusion_at_threshold([np.nan, 0.1], [0, 1], 0.5)

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="3 scores but 2 labels"):
            confusion_at_threshold([0.1, 0.2, 0.3], [0, 1], 0.5)


class TestPrCurve:
    def test_perfect_ranking(self):
        curve = pr_curve_and_auc(SCORES, LABELS)

        assert curve.auc_pr == pytest.approx(1.0)
        assert any(p.fnr == 0 and p.fpr == 0 for p in curve.points)

    def test_two_records(self):
        assert pr_curve_and_auc([0.9, 0.8], [0, 1]).auc_pr == pytest.approx(
            0.5
        )

    def test_points(self):
        curve = pr_curve_and_auc([0.3, 0.3, 0.8], [0, 1, 1])

        assert curve.thresholds.tolist() == [0.3, 0.8, np.inf]
        assert curve.fnr.tolist() == [0.0, 0.5, 1.0]
        assert curve.fpr.tolist() == [1.0, 0.0, 0.0]
        assert curve.n_positives == 2

    def test_random_scores(self):
        rng = np.random.default_rng(0)
        n, prevalence = 100_000, 0.1
        labels = (rng.random(n) < prevalence).astype(int)
        auc = pr_curve_and_auc(rng.random(n), labels).auc_pr

        sigma = np.sqrt(prevalence * (1 - prevalence) / n)
        assert abs(auc - labels.mean()) < 3 * sigma + 5e-3

    @pytest.mark.parametrize(
        "transform",
        [np.log, lambda s: 1 / (1 + np.exp(-4 * s)), lambda s: 7 * s - 2],
    )
    def test_monotone_transform(self, transform):
        rng = np.random.default_rng(4)
        scores = 0.05 + rng.random(5000)
        labels = (rng.random(5000) < scores / 2).astype(int)

        auc = pr_curve_and_auc(scores, labels).auc_pr
        transformed = pr_curve_and_auc(transform(scores), labels).auc_pr

        assert abs(auc - transformed) <= 1e-12

    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        scores = rng.integers(0, 10, size=60) / 10
        labels = rng.integers(0, 2, size=60)
        curve = fnr_fpr_curve(scores, labels)

        for point in curve.points:
            direct = confusion_at_threshold(scores, labels, point.threshold)
            assert (point.fn, point.fp) == (direct.fn, direct.fp)

    def test_single_class(self):
        with pytest.raises(ValueError, match="Both classes"):
            pr_curve_and_auc([0.1, 0.2], [0, 0])

    def test_low_confidence(self):
        curve = pr_curve_and_auc(SCORES, LABELS)

        assert all(p.low_confidence for p in curve.points)
        assert curve_summary(curve, "lr")["n_low_confidence"] == len(curve)

    def test_anti_ranking(self):
        curve = fnr_fpr_curve([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1])

        assert curve.fnr.tolist() == [0.0, 0.5, 1.0, 1.0, 1.0]
        assert curve.fpr.tolist() == [1.0, 1.0, 1.0, 0.5, 0.0]


class TestTargetFnr:
    @pytest.fixture
    def curve(self):
        rng = np.random.default_rng(2)
        labels = np.r_[np.ones(200, int), np.zeros(800, int)]
        scores = np.r_[rng.normal(2, 1, 200), rng.normal(0, 1, 800)]
        return pr_curve_and_auc(scores, labels)

    def test_largest_threshold(self, curve):
        point = threshold_for_target_fnr(curve, 0.1)
        larger = [p for p in curve.points if p.threshold > point.threshold]

        assert point.fnr <= 0.1
        assert all(p.fnr > 0.1 for p in larger)
        assert not point.unreachable

    def test_target_one(self, curve):
        assert threshold_for_target_fnr(curve, 1.0).threshold == np.inf

    def test_separable_zero(self):
        curve = pr_curve_and_auc(SCORES, LABELS)
        point = threshold_for_target_fnr(curve, 0.0)

        assert point.threshold == 0.7
        assert point.fpr == 0.0

    def test_below_resolution(self, curve):
        point = threshold_for_target_fnr(curve, 1e-3)

        assert point.unreachable

    def test_empty(self):
        with pytest.raises(ValueError, match="no operating point"):
            threshold_for_target_fnr(CurveSet(points=()), 0.1)


class TestBinormalCurve:
    def test_relation(self):
        fnr = np.array([1e-3, 1e-2, 1e-1])
        curve = binormal_curve(fnr, 3.0)

        assert curve.fpr == pytest.approx(norm.sf(norm.ppf(fnr) + 3.0))
        assert curve.n_positives is None

    def test_sorted(self):
        curve = binormal_curve([0.5, 0.01], 1.0)

        assert curve.fnr.tolist() == [0.01, 0.5]
        assert (np.diff(curve.thresholds) > 0).all()

    def test_range(self):
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            binormal_curve([0.0, 0.5], 1.0)


class TestCurveTable:
    def test_with_counts(self):
        curve = pr_curve_and_auc([0.3, 0.3, 0.8, 0.1], [0, 1, 1, 0])
        restored = CurveSet.from_frame(curve.to_frame(), curve.auc_pr)

        assert restored.fnr.tolist() == curve.fnr.tolist()
        assert restored.n_positives == 2

    def test_synthetic(self):
        frame = pd.DataFrame(
            {"theta": [1.0, 0.0], "fnr": [0.2, 0.1], "fpr": [0.01, 0.05]}
        )
        curve = CurveSet.from_frame(frame)

        assert curve.fnr.tolist() == [0.1, 0.2]
        assert np.isnan(curve[0].precision)

    def test_missing_column(self):
        with pytest.raises(ValueError, match="no column 'fpr'"):
            CurveSet.from_frame(pd.DataFrame({"theta": [0], "fnr": [0]}))

    def test_columns(self):
        frame = pr_curve_and_auc(SCORES, LABELS).to_frame()

        assert list(frame.columns[:5]) == ["theta", "fn", "fp", "tp", "tn"]
        assert "low_confidence" in frame.columns


class TestOperatingPoint:
    def test_interval(self):
        point = OperatingPoint.from_counts(0.5, fn=0, fp=3, tp=50, tn=47)
        lo, hi = point.fnr_interval()

        assert lo == pytest.approx(0, abs=1e-12)
        assert 0 < hi < 0.1
