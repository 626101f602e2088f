"""Evaluation of decodability predictors on imbalanced data.

A record is predicted positive (block error, NACK) when its score is at
least the threshold. Curves have one operating point per distinct score
plus the point at +inf, which predicts nothing positive.
"""

import logging
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd
from scipy.stats import norm
from sklearn.metrics import average_precision_score

from eharqsim.utils.stats import wilson_interval

logger = logging.getLogger(__name__)

LOW_CONFIDENCE_POSITIVES = 100
CURVE_COLUMNS = (
    "theta",
    "fn",
    "fp",
    "tp",
    "tn",
    "fnr",
    "fpr",
    "precision",
    "recall",
    "fnr_ci_lo",
    "fnr_ci_hi",
    "low_confidence",
)


def _ratio(num, den, empty):
    return num / den if den > 0 else empty


@dataclass(frozen=True)
class OperatingPoint:
    """A classifier threshold with its error rates.

    Attributes
    ----------
    threshold : float
        the threshold θ, a score at least θ is predicted positive
    fnr, fpr : float
        the false negative and false positive rates
    fn, fp, tp, tn : int or None
        the confusion counts, None for a synthetic curve
    unreachable : bool
        whether the point was returned for an FNR target it misses

    """

    threshold: float
    fnr: float
    fpr: float
    fn: int | None = None
    fp: int | None = None
    tp: int | None = None
    tn: int | None = None
    unreachable: bool = False

    @classmethod
    def from_counts(cls, threshold, fn, fp, tp, tn):
        """Create the point from its confusion counts."""
        fn, fp, tp, tn = int(fn), int(fp), int(tp), int(tn)
        return cls(
            threshold=float(threshold),
            fnr=_ratio(fn, fn + tp, 0.0),
            fpr=_ratio(fp, fp + tn, 0.0),
            fn=fn,
            fp=fp,
            tp=tp,
            tn=tn,
        )

    @property
    def has_counts(self):
        return self.tp is not None

    @property
    def n_positives(self):
        return self.fn + self.tp if self.has_counts else None

    @property
    def precision(self):
        """Return tp/(tp+fp), 1 when nothing is predicted positive."""
        if not self.has_counts:
            return np.nan
        return _ratio(self.tp, self.tp + self.fp, 1.0)

    @property
    def recall(self):
        return 1.0 - self.fnr

    @property
    def low_confidence(self):
        """Whether too few positives back the FNR estimate."""
        if not self.has_counts:
            return False
        return self.n_positives < LOW_CONFIDENCE_POSITIVES

    def fnr_interval(self, confidence=0.95):
        """Return the Wilson interval of the FNR."""
        if not self.has_counts:
            return np.nan, np.nan
        return wilson_interval(self.fn, self.n_positives, confidence)

    def to_dict(self):
        """Return the point as a row of the curve table."""
        lo, hi = self.fnr_interval()
        return {
            "theta": self.threshold,
            "fn": self.fn,
            "fp": self.fp,
            "tp": self.tp,
            "tn": self.tn,
            "fnr": self.fnr,
            "fpr": self.fpr,
            "precision": self.precision,
            "recall": self.recall,
            "fnr_ci_lo": lo,
            "fnr_ci_hi": hi,
            "low_confidence": self.low_confidence,
        }


@dataclass(frozen=True)
class CurveSet:
    """Operating points ordered by increasing threshold."""

    points: tuple
    auc_pr: float = np.nan

    def __len__(self):
        return len(self.points)

    def __getitem__(self, index):
        return self.points[index]

    @property
    def thresholds(self):
        return np.array([p.threshold for p in self.points])

    @property
    def fnr(self):
        return np.array([p.fnr for p in self.points])

    @property
    def fpr(self):
        return np.array([p.fpr for p in self.points])

    @property
    def n_positives(self):
        """Return the number of positives, None for a synthetic curve."""
        return self.points[0].n_positives if self.points else None

    def to_frame(self):
        """Return the curve as a table with the curve CSV columns."""
        frame = pd.DataFrame(
            [p.to_dict() for p in self.points], columns=list(CURVE_COLUMNS)
        )
        for column in ("fn", "fp", "tp", "tn"):
            frame[column] = frame[column].astype("Int64")
        return frame

    @classmethod
    def from_frame(cls, frame, auc_pr=np.nan):
        """Create the curve from a table written by to_frame."""
        missing = [c for c in ("theta", "fnr", "fpr") if c not in frame]
        if missing:
            msg = f"The curve table has no column '{missing[0]}'."
            raise ValueError(msg)

        has_counts = all(
            c in frame and frame[c].notna().all()
            for c in ("fn", "fp", "tp", "tn")
        )
        points = []
        for row in frame.sort_values("theta").itertuples(index=False):
            if has_counts:
                point = OperatingPoint.from_counts(
                    row.theta, row.fn, row.fp, row.tp, row.tn
                )
            else:
                point = OperatingPoint(
                    float(row.theta), float(row.fnr), float(row.fpr)
                )
            points.append(point)

        return cls(points=tuple(points), auc_pr=float(auc_pr))


def _validate(scores, labels, *, both_classes=False):
    scores = np.asarray(scores, dtype=np.float64).ravel()
    labels = np.asarray(labels).ravel()

    if scores.size == 0:
        msg = "The scores are empty."
        raise ValueError(msg)

    if scores.size != labels.size:
        msg = (
            f"There are {scores.size} scores but {labels.size} labels."
        )
        raise ValueError(msg)

    if not np.isin(labels, (0, 1)).all():
        msg = "The labels must be 0 (no error) or 1 (block error)."
        raise ValueError(msg)

    if np.isnan(scores).any():
        msg = "The scores contain NaN."
        raise ValueError(msg)

    labels = labels.astype(np.int64)
    if both_classes:
        n_pos = int(labels.sum())
        if n_pos in (0, labels.size):
            msg = (
                "Both classes must be present to build a curve "
                f"({n_pos} positives out of {labels.size})."
            )
            raise ValueError(msg)

    return scores, labels


def confusion_at_threshold(scores, labels, threshold):
    """Count the confusion matrix at one threshold.

    Parameters
    ----------
    scores : array-like
        the classifier scores
    labels : array-like
        the labels, 1 for a block error
    threshold : float
        the threshold θ, a score at least θ is predicted positive

    Returns
    -------
    OperatingPoint
        the operating point

    """
    scores, labels = _validate(scores, labels)
    predicted = scores >= threshold
    positive = labels == 1
    return OperatingPoint.from_counts(
        threshold,
        fn=np.count_nonzero(~predicted & positive),
        fp=np.count_nonzero(predicted & ~positive),
        tp=np.count_nonzero(predicted & positive),
        tn=np.count_nonzero(~predicted & ~positive),
    )


def _curve(scores, labels):
    scores, labels = _validate(scores, labels, both_classes=True)
    distinct, inverse = np.unique(scores, return_inverse=True)
    pos = np.bincount(inverse, weights=labels, minlength=distinct.size)
    neg = np.bincount(inverse, weights=1 - labels, minlength=distinct.size)

    # counts at and above each distinct score, then nothing at +inf
    tp = np.append(np.cumsum(pos[::-1])[::-1], 0).astype(np.int64)
    fp = np.append(np.cumsum(neg[::-1])[::-1], 0).astype(np.int64)
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    thresholds = np.append(distinct, np.inf)

    points = tuple(
        OperatingPoint.from_counts(t, n_pos - tp_k, fp_k, tp_k, n_neg - fp_k)
        for t, tp_k, fp_k in zip(thresholds, tp, fp, strict=True)
    )
    auc_pr = float(average_precision_score(labels, scores))
    return CurveSet(points=points, auc_pr=auc_pr)


def pr_curve_and_auc(scores, labels):
    """Build the precision-recall curve and its area.

    The area is the average precision, the sum of P_i·(R_i − R_{i−1})
    over the distinct scores in decreasing order. Tied scores form one
    threshold step.

    Parameters
    ----------
    scores : array-like
        the classifier scores
    labels : array-like
        the labels, both classes present

    Returns
    -------
    CurveSet
        the operating points and auc_pr

    """
    return _curve(scores, labels)


def fnr_fpr_curve(scores, labels):
    """Build the FNR-FPR curve, one point per distinct threshold."""
    return _curve(scores, labels)


def threshold_for_target_fnr(curve, fnr_target):
    """Select the working point of an FNR target.

    Parameters
    ----------
    curve : CurveSet
        the curve
    fnr_target : float
        the largest acceptable FNR

    Returns
    -------
    OperatingPoint
        the point with the largest threshold whose FNR is at most the
        target. Without such a point, or when the target is below the
        resolution 1/#positives of the data, the point of minimal FNR
        is returned flagged unreachable.

    """
    if len(curve) == 0:
        msg = "The curve has no operating point."
        raise ValueError(msg)

    fnr = curve.fnr
    meets = np.flatnonzero(fnr <= fnr_target)
    n_pos = curve.n_positives

    if meets.size:
        # thresholds ascend, the last match has the largest θ
        point = curve[meets[-1]]
        below_resolution = n_pos is not None and 0 < fnr_target < 1 / n_pos
        if not below_resolution:
            return point
    else:
        best = np.flatnonzero(fnr == fnr.min())
        point = curve[best[-1]]

    logger.warning(
        f"The FNR target {fnr_target:.3g} cannot be resolved by the data, "
        f"the point with FNR {point.fnr:.3g} is used."
    )
    return replace(point, unreachable=True)


def binormal_curve(fnr_values, separation, thresholds=None):
    """Build a synthetic FNR-FPR curve of binormal scores.

    Scores of error-free words are standard normal and those of
    erroneous words are normal with mean `separation` and unit variance,
    so fpr = 1 − Φ(Φ⁻¹(fnr) + separation).

    Parameters
    ----------
    fnr_values : array-like
        the FNRs in (0, 1)
    separation : float
        the distance between the class means
    thresholds : array-like, optional
        the thresholds of the points. Default to None, the binormal
        thresholds separation + Φ⁻¹(fnr).

    Returns
    -------
    CurveSet
        the curve without confusion counts

    """
    fnr = np.sort(np.asarray(fnr_values, dtype=np.float64).ravel())
    if fnr.size == 0 or not ((fnr > 0) & (fnr < 1)).all():
        msg = "The FNR values of a binormal curve must lie in (0, 1)."
        raise ValueError(msg)

    z = norm.ppf(fnr)
    fpr = norm.sf(z + separation)
    if thresholds is None:
        thresholds = z + separation
    thresholds = np.asarray(thresholds, dtype=np.float64)

    points = tuple(
        OperatingPoint(float(t), float(a), float(b))
        for t, a, b in zip(thresholds, fnr, fpr, strict=True)
    )
    return CurveSet(points=points)


def curve_summary(curve, name=None):
    """Summarise a curve for the evaluation JSON."""
    flagged = [p for p in curve.points if p.low_confidence]
    return {
        "classifier": name,
        "auc_pr": curve.auc_pr,
        "n_points": len(curve),
        "n_positives": curve.n_positives,
        "n_low_confidence": len(flagged),
    }
