"""Bidirectional AUC: mean of AUC(+1 vs rest) on the score and AUC(-1 vs rest)
on the negated score."""

from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np
from scipy.stats import rankdata


class BidirectionalAUC(NamedTuple):
    forward: float
    backward: float
    mean: float


def auc(scores, positive) -> float:
    """Rank-statistic AUC; tied scores count one half."""
    scores = np.asarray(scores, dtype=np.float64)
    positive = np.asarray(positive, dtype=bool)
    n_pos = int(positive.sum())
    n_neg = positive.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative instance")
    ranks = rankdata(scores)
    u = ranks[positive].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def bidirectional_auc(scores, labels) -> BidirectionalAUC:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    if scores.shape != labels.shape:
        raise ValueError("scores and labels must be aligned")
    try:
        forward = auc(scores, labels == 1)
    except ValueError:
        raise ValueError("forward sub-problem (class +1 vs rest) needs both classes present") from None
    try:
        backward = auc(-scores, labels == -1)
    except ValueError:
        raise ValueError("backward sub-problem (class -1 vs rest) needs both classes present") from None
    return BidirectionalAUC(forward, backward, (forward + backward) / 2.0)


def bidirectional_auc_by_id(predictions: Mapping[str, float], targets: Mapping[str, int]) -> BidirectionalAUC:
    """Align predictions and targets by SampleID first."""
    missing = sorted(set(targets) - set(predictions))
    if missing:
        raise ValueError(f"no prediction for {len(missing)} ids, e.g. {missing[0]!r}")
    ids = list(targets)
    return bidirectional_auc([predictions[i] for i in ids], [targets[i] for i in ids])
