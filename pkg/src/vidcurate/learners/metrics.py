"""Binary-classification evaluation: precision/recall/F1, accuracy, ROC, AUC."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = ["EvalReport", "evaluate"]


@dataclass
class ClassMetrics:
    precision: Optional[float]
    recall: Optional[float]
    f1: Optional[float]


@dataclass
class EvalReport:
    """Metrics at a fixed threshold plus the threshold-free ROC/AUC.

    A metric whose denominator is zero is reported as None, never as 0.
    """

    positive: ClassMetrics
    negative: ClassMetrics
    accuracy: float
    roc_points: list[tuple[float, float]] = field(default_factory=list)
    auc: Optional[float] = None
    threshold: float = 0.5
    n: int = 0

    def macro_f1(self) -> float:
        """Mean of the two class F1s; an undefined class F1 counts as 0."""
        vals = [m.f1 if m.f1 is not None else 0.0
                for m in (self.positive, self.negative)]
        return sum(vals) / 2.0

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "n": self.n,
            "accuracy": self.accuracy,
            "positive": vars(self.positive),
            "negative": vars(self.negative),
            "auc": self.auc,
            "roc_points": [list(p) for p in self.roc_points],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EvalReport":
        return cls(positive=ClassMetrics(**d["positive"]),
                   negative=ClassMetrics(**d["negative"]),
                   accuracy=d["accuracy"],
                   roc_points=[tuple(p) for p in d["roc_points"]],
                   auc=d["auc"], threshold=d["threshold"], n=d["n"])


def _prf(tp: int, fp: int, fn: int) -> ClassMetrics:
    precision = tp / (tp + fp) if (tp + fp) > 0 else None
    recall = tp / (tp + fn) if (tp + fn) > 0 else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return ClassMetrics(precision=precision, recall=recall, f1=f1)


def _auc_rank(scores: np.ndarray, y: np.ndarray) -> float:
    """AUC via average ranks; equals pairwise concordance with ties as 1/2."""
    n = len(scores)
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(n)
    sorted_scores = scores[order]
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sorted_scores[j + 1] == sorted_scores[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    n_pos = int(y.sum())
    n_neg = n - n_pos
    return (ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _roc_curve(scores: np.ndarray, y: np.ndarray) -> list[tuple[float, float]]:
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    order = np.argsort(-scores, kind="stable")
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(order):
        j = i
        # all samples sharing a score move together
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        for k in range(i, j + 1):
            if y[order[k]] == 1:
                tp += 1
            else:
                fp += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j + 1
    if points[-1] != (1.0, 1.0):
        points.append((1.0, 1.0))
    return points


def evaluate(scores: Sequence[float], y: Sequence[int],
             threshold: float = 0.5) -> EvalReport:
    """Score a binary classifier's probabilities against 0/1 labels.

    Predicted positive means score >= threshold. AUC is the probability that
    a random positive outscores a random negative, ties counting one half;
    it is None when either class is absent.
    """
    if len(scores) != len(y):
        raise ValueError(f"length mismatch: {len(scores)} scores vs {len(y)} labels")
    if len(scores) == 0:
        raise ValueError("need at least one sample")
    s = np.asarray(scores, dtype=float)
    labels = np.asarray(y, dtype=int)
    if not np.isin(labels, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    pred = (s >= threshold).astype(int)

    tp = int(((pred == 1) & (labels == 1)).sum())
    fp = int(((pred == 1) & (labels == 0)).sum())
    fn = int(((pred == 0) & (labels == 1)).sum())
    tn = int(((pred == 0) & (labels == 0)).sum())

    n_pos, n_neg = int(labels.sum()), int((1 - labels).sum())
    has_both = n_pos > 0 and n_neg > 0
    return EvalReport(
        positive=_prf(tp, fp, fn),
        negative=_prf(tn, fn, fp),
        accuracy=(tp + tn) / len(labels),
        roc_points=_roc_curve(s, labels) if has_both else [],
        auc=_auc_rank(s, labels) if has_both else None,
        threshold=threshold,
        n=len(labels),
    )
