"""Stratified k-fold cross-validation of the ensemble."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed

from . import gbm
from .ensemble import train_features
from .features import FEATURE_NAMES
from .metrics import BidirectionalAUC, bidirectional_auc

logger = logging.getLogger(__name__)


def stratified_folds(labels: Sequence[int], k: int = 10, seed: int = 1) -> list[np.ndarray]:
    """Test indices of each fold.

    Items are shuffled within each label, laid out label by label, and dealt
    round-robin, so fold sizes differ by at most one and every fold mirrors
    the label mix.
    """
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("need at least 2 folds")
    if k > labels.size:
        raise ValueError(f"cannot make {k} folds from {labels.size} items")
    rng = np.random.default_rng(seed)
    layout = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        layout.append(members[rng.permutation(members.size)])
    layout = np.concatenate(layout)
    assignment = np.empty(labels.size, dtype=np.int64)
    assignment[layout] = np.arange(layout.size) % k
    return [np.flatnonzero(assignment == f) for f in range(k)]


@dataclass
class CVResult:
    folds: list[np.ndarray]
    fold_auc: list[BidirectionalAUC]
    fold_scheme_auc: list[list[BidirectionalAUC]]
    oof_scores: np.ndarray
    oof_scheme_scores: np.ndarray

    @property
    def mean_auc(self) -> float:
        return float(np.mean([a.mean for a in self.fold_auc]))

    def scheme_mean_auc(self, scheme: int) -> float:
        return float(np.mean([s[scheme].mean for s in self.fold_scheme_auc]))


def _run_fold(F, labels, test, cfg, feature_names, weights):
    train = np.setdiff1d(np.arange(labels.size), test)
    model = train_features(F[train], labels[train], cfg, feature_names, weights)
    schemes = model.scheme_scores(F[test])
    return schemes, schemes @ np.asarray(model.weights)


def kfold_cv(F: np.ndarray, labels: Sequence[int], k: int = 10, cfg: gbm.GbmConfig = gbm.GbmConfig(),
             feature_names: Sequence[str] = FEATURE_NAMES, seed: int = 1,
             weights=(1 / 3, 1 / 3, 1 / 3), n_jobs: int = 1) -> CVResult:
    """Cross-validate on precomputed 43-slot feature rows of the original pairs.

    Swap augmentation happens inside each training fold only, so a test
    pair's swapped twin never reaches training.
    """
    F = np.asarray(F, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    folds = stratified_folds(labels, k, seed)
    for f, test in enumerate(folds):
        train_labels = np.delete(labels, test)
        for c in (-1, 0, 1):
            if not np.any(train_labels == c):
                raise ValueError(f"class {c:+d} missing from the training part of fold {f}")

    jobs = (delayed(_run_fold)(F, labels, test, cfg, tuple(feature_names), weights) for test in folds)
    if n_jobs == 1:
        outputs = [job[0](*job[1], **job[2]) for job in jobs]
    else:
        outputs = Parallel(n_jobs=n_jobs)(jobs)

    oof_schemes = np.zeros((labels.size, 3))
    oof = np.zeros(labels.size)
    fold_auc, fold_scheme_auc = [], []
    for test, (schemes, combined) in zip(folds, outputs):
        oof_schemes[test] = schemes
        oof[test] = combined
        fold_auc.append(bidirectional_auc(combined, labels[test]))
        fold_scheme_auc.append([bidirectional_auc(schemes[:, j], labels[test]) for j in range(3)])
        logger.info("fold AUC %.4f", fold_auc[-1].mean)
    return CVResult(folds, fold_auc, fold_scheme_auc, oof, oof_schemes)
