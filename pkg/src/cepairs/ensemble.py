"""Three ternary-classification schemes and their equal-weight combination.

1. one three-class model:               p1 = P(+1) - P(-1)
2. direction (+1 vs -1, trained on directed pairs only) times dependence
   (0 vs the rest):                     p2 = (Pd(+1) - Pd(-1)) * (1 - P(0))
3. two one-vs-rest models:              p3 = P_pos(+1)/2 - P_neg(-1)/2

Training data is doubled by swapping every pair and negating its label.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from joblib import Parallel, delayed

from . import gbm
from .data_model import LabeledDataset, swap
from .features import CONTRACT_VERSION, FEATURE_NAMES, N_FEATURES, SWAP_PERMUTATION, extract_batch, feature_indices
from .preprocess import DEFAULT_QUANTIZER, QuantizerConfig

logger = logging.getLogger(__name__)

FORMAT_NAME = "cepairs-ensemble"
FORMAT_VERSION = 1
SCHEMES = ("scheme1", "scheme2", "scheme3")
MODEL_NAMES = ("scheme1", "scheme2_direction", "scheme2_dependence", "scheme3_pos", "scheme3_neg")


def augment(ds: LabeledDataset) -> LabeledDataset:
    """Originals followed by their swapped copies with negated labels."""
    if not ds.is_labeled:
        raise ValueError("augment needs a labeled dataset")
    pairs = list(ds.pairs) + [swap(p) for p in ds.pairs]
    labels = list(ds.labels) + [-c for c in ds.labels]
    return LabeledDataset(tuple(pairs), tuple(labels))


def augment_features(F: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Feature-space equivalent of :func:`augment` for full 43-slot rows."""
    F = np.asarray(F, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if F.shape[-1] != N_FEATURES:
        raise ValueError("augmentation needs full 43-slot feature rows")
    return np.vstack([F, F[:, SWAP_PERMUTATION]]), np.concatenate([labels, -labels])


def _check_classes(labels: np.ndarray) -> None:
    for c, name in ((1, "+1 (A causes B)"), (0, "0 (no causal relation)"), (-1, "-1 (B causes A)")):
        if not np.any(labels == c):
            raise ValueError(f"training data has no pairs of class {name}")


@dataclass(eq=False)
class EnsembleModel:
    models: dict[str, gbm.GbmModel]
    weights: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    feature_names: tuple[str, ...] = FEATURE_NAMES
    contract_version: int = CONTRACT_VERSION
    quantizer: QuantizerConfig = field(default_factory=QuantizerConfig)

    def __post_init__(self):
        self.weights = tuple(float(w) for w in self.weights)
        if len(self.weights) != 3 or abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("weights must be three numbers summing to 1")

    def with_weights(self, weights) -> "EnsembleModel":
        return EnsembleModel(self.models, tuple(weights), self.feature_names,
                             self.contract_version, self.quantizer)

    def _columns(self, F: np.ndarray, contract_version) -> np.ndarray:
        if contract_version is not None and contract_version != self.contract_version:
            raise ValueError(
                f"feature contract mismatch: model v{self.contract_version}, input v{contract_version}"
            )
        F = np.asarray(F, dtype=np.float64)
        if F.ndim == 1:
            F = F[None, :]
        if F.shape[1] != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES}-slot feature vectors, got {F.shape[1]}")
        return F[:, feature_indices(self.feature_names)]

    def scheme_probabilities(self, F: np.ndarray, contract_version=CONTRACT_VERSION) -> dict[str, np.ndarray]:
        X = self._columns(F, contract_version)
        return {name: m.predict_proba(X) for name, m in self.models.items()}

    def scheme_scores(self, F: np.ndarray, contract_version=CONTRACT_VERSION) -> np.ndarray:
        """(n, 3) matrix of p1, p2, p3."""
        return scheme_scores_from_probabilities(self.scheme_probabilities(F, contract_version))

    def score(self, F: np.ndarray, contract_version=CONTRACT_VERSION) -> np.ndarray:
        """Combined signed score in [-1, 1]; positive means A causes B."""
        return self.scheme_scores(F, contract_version) @ np.asarray(self.weights)

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "contract_version": self.contract_version,
            "feature_names": list(self.feature_names),
            "weights": list(self.weights),
            "quantizer": {"sfactor": self.quantizer.sfactor, "maxdev": self.quantizer.maxdev},
            "models": {name: self.models[name].to_dict() for name in MODEL_NAMES},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EnsembleModel":
        if d.get("format") != FORMAT_NAME or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a cepairs ensemble model (or unsupported version)")
        if d["contract_version"] != CONTRACT_VERSION:
            raise ValueError(
                f"model was trained on feature contract v{d['contract_version']}, "
                f"this library produces v{CONTRACT_VERSION}"
            )
        return cls(
            models={name: gbm.GbmModel.from_dict(d["models"][name]) for name in MODEL_NAMES},
            weights=tuple(d["weights"]),
            feature_names=tuple(d["feature_names"]),
            contract_version=d["contract_version"],
            quantizer=QuantizerConfig(**d["quantizer"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "EnsembleModel":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "EnsembleModel":
        with open(path) as fh:
            return cls.loads(fh.read())


def scheme_scores_from_probabilities(probs: dict[str, np.ndarray]) -> np.ndarray:
    """Combine the five models' class probabilities into p1, p2, p3.

    Class columns: scheme1 is (-1, 0, +1); the direction model is (-1, +1);
    dependence is (dependent, independent); scheme3_pos is (rest, +1) and
    scheme3_neg is (rest, -1).
    """
    s1 = probs["scheme1"]
    p1 = s1[:, 2] - s1[:, 0]
    d = probs["scheme2_direction"]
    dependent = 1.0 - probs["scheme2_dependence"][:, 1]
    p2 = (d[:, 1] - d[:, 0]) * dependent
    p3 = 0.5 * probs["scheme3_pos"][:, 1] - 0.5 * probs["scheme3_neg"][:, 1]
    return np.column_stack([p1, p2, p3])


def _targets(labels: np.ndarray) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Row mask and class indices of every underlying model."""
    every = np.ones(labels.size, dtype=bool)
    directed = labels != 0
    return {
        "scheme1": (every, labels + 1),
        "scheme2_direction": (directed, (labels[directed] > 0).astype(np.int64)),
        "scheme2_dependence": (every, (labels == 0).astype(np.int64)),
        "scheme3_pos": (every, (labels == 1).astype(np.int64)),
        "scheme3_neg": (every, (labels == -1).astype(np.int64)),
    }


def train_features(F: np.ndarray, labels: Sequence[int], cfg: gbm.GbmConfig = gbm.GbmConfig(),
                   feature_names: Sequence[str] = FEATURE_NAMES,
                   weights=(1 / 3, 1 / 3, 1 / 3), augment_swaps: bool = True,
                   quantizer: QuantizerConfig = DEFAULT_QUANTIZER, n_jobs: int = 1) -> EnsembleModel:
    """Train the five models on precomputed 43-slot feature rows."""
    F = np.asarray(F, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _check_classes(labels)
    if augment_swaps:
        F, labels = augment_features(F, labels)
    X = np.ascontiguousarray(F[:, feature_indices(feature_names)])
    jobs = []
    for name, (mask, y) in _targets(labels).items():
        jobs.append((name, X[mask], y))

    def _fit(name, Xm, ym):
        logger.info("fitting %s on %d rows", name, Xm.shape[0])
        return name, gbm.fit(Xm, ym, cfg, CONTRACT_VERSION)

    if n_jobs == 1:
        fitted = [_fit(*job) for job in jobs]
    else:
        fitted = Parallel(n_jobs=n_jobs)(delayed(_fit)(*job) for job in jobs)
    return EnsembleModel(dict(fitted), tuple(weights), tuple(feature_names), CONTRACT_VERSION, quantizer)


def train(ds: LabeledDataset, cfg: gbm.GbmConfig = gbm.GbmConfig(), **kwargs) -> EnsembleModel:
    """Extract features for every pair and train the ensemble on the swap-augmented set.

    Swapped copies are not re-extracted: their rows are the slot permutation
    of the originals', which is exactly what extraction would return.
    """
    if not ds.is_labeled:
        raise ValueError("training needs a labeled dataset")
    quantizer = kwargs.pop("quantizer", DEFAULT_QUANTIZER)
    n_jobs = kwargs.get("n_jobs", 1)
    F = extract_batch(ds.pairs, quantizer, n_jobs=n_jobs)
    return train_features(F, ds.label_array(), cfg, quantizer=quantizer, **kwargs)


def score(model: EnsembleModel, F: np.ndarray, contract_version=CONTRACT_VERSION) -> np.ndarray:
    return model.score(F, contract_version)
