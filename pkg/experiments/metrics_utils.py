# experiments/metrics_utils.py
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from exceptions import EmptyInput, LengthMismatch, SingleClassDataset


@dataclass(frozen=True)
class RocCurve:
    """(fpr, tpr) points from (0, 0) to (1, 1), one per distinct threshold"""
    points: List[Tuple[float, float]]
    thresholds: List[float]
    auc: float

    @property
    def fpr(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def tpr(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def _check_pair(first: Sequence, second: Sequence):
    if len(first) != len(second):
        raise LengthMismatch(f"{len(first)} predictions vs {len(second)} labels")
    if len(first) == 0:
        raise EmptyInput("no samples to evaluate")


def accuracy(predictions: Sequence[int], labels: Sequence[int]) -> float:
    _check_pair(predictions, labels)
    return float(np.mean(np.asarray(predictions) == np.asarray(labels)))


def _split_by_label(scores: Sequence[float], labels: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    _check_pair(scores, labels)
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    positives = scores[labels == 1]
    negatives = scores[labels == 0]
    if len(positives) == 0 or len(negatives) == 0:
        raise SingleClassDataset("ROC needs at least one sample of each class")
    return positives, negatives


def roc(scores: Sequence[float], labels: Sequence[int]) -> RocCurve:
    """
    Sweep the threshold over the distinct scores (ties form one step), predicting
    class 1 when score >= threshold; AUC by the trapezoid rule.
    """
    positives, negatives = _split_by_label(scores, labels)
    positives = np.sort(positives)
    negatives = np.sort(negatives)

    distinct = np.unique(np.concatenate([positives, negatives]))[::-1]
    thresholds = np.concatenate([[np.inf], distinct, [-np.inf]])

    tp = len(positives) - np.searchsorted(positives, thresholds, side='left')
    fp = len(negatives) - np.searchsorted(negatives, thresholds, side='left')
    tpr = tp / len(positives)
    fpr = fp / len(negatives)

    return RocCurve(
        points=[(float(x), float(y)) for x, y in zip(fpr, tpr)],
        thresholds=[float(t) for t in thresholds],
        auc=float(trapezoid(tpr, fpr)),
    )


def mann_whitney_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """P(random positive outscores random negative), ties counted 1/2"""
    positives, negatives = _split_by_label(scores, labels)
    diff = positives[:, None] - negatives[None, :]
    wins = np.count_nonzero(diff > 0) + 0.5 * np.count_nonzero(diff == 0)
    return float(wins / diff.size)
