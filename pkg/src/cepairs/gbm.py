"""Gradient boosted regression trees for binomial and multinomial deviance.

Each stage fits one regression tree per class (one in total for the binary
case) to the negative gradient of the deviance.  Splits maximise the
squared-error reduction over all features and all midpoints between
consecutive distinct values; leaves take a single Newton step, clipped.
Everything is deterministic: no row or feature subsampling, and ties go to
the lowest feature index, then the lowest threshold.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit
from scipy.special import expit, logsumexp, softmax

FORMAT_NAME = "cepairs-gbm"
FORMAT_VERSION = 1

BINOMIAL = "binomial_deviance"
MULTINOMIAL = "multinomial_deviance"

# relative slack under which two split gains count as tied
GAIN_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class GbmConfig:
    n_stages: int = 500
    max_depth: int = 9
    learning_rate: float = 0.1
    min_samples_leaf: int = 1
    loss: str | None = None  # None: binomial for two classes, multinomial otherwise
    leaf_clip: float = 10.0

    def __post_init__(self):
        if self.n_stages < 0:
            raise ValueError("n_stages must be non-negative")
        if self.max_depth < 0:
            raise ValueError("max_depth must be non-negative")
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be at least 1")
        if self.loss not in (None, BINOMIAL, MULTINOMIAL):
            raise ValueError(f"unknown loss {self.loss!r}")
        if not self.leaf_clip > 0:
            raise ValueError("leaf_clip must be positive")


@dataclass(frozen=True, eq=False)
class Tree:
    """Array-encoded binary tree; ``feature == -1`` marks a leaf.

    Samples with ``x[feature] <= threshold`` go to ``left``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    @property
    def depth(self) -> int:
        depths = np.zeros(self.n_nodes, dtype=np.int64)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depths[self.left[i]] = depths[self.right[i]] = depths[i] + 1
        return int(depths.max())

    def predict(self, X: np.ndarray) -> np.ndarray:
        return _predict_tree(np.ascontiguousarray(X, dtype=np.float64), self.feature,
                             self.threshold, self.left, self.right, self.value)

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(
            np.asarray(d["feature"], dtype=np.int64),
            np.asarray(d["threshold"], dtype=np.float64),
            np.asarray(d["left"], dtype=np.int64),
            np.asarray(d["right"], dtype=np.int64),
            np.asarray(d["value"], dtype=np.float64),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return all(np.array_equal(getattr(self, k), getattr(other, k))
                   for k in ("feature", "threshold", "left", "right", "value"))


@njit(cache=True)
def _predict_tree(X, feature, threshold, left, right, value):
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = value[node]
    return out


@njit(cache=True)
def _grow_tree(X, presorted, target, hess, max_depth, min_leaf, newton_scale, clip, tie_rtol):
    """Grow one regression tree on ``target``.

    ``presorted[f]`` lists the rows in ascending order of feature ``f``.  Each
    node owns the same segment of every row of the order matrix; a split
    stably partitions those segments.  Returns the node arrays and the leaf
    value of every training row.
    """
    n, n_feat = X.shape
    order = presorted.copy()
    cap = min(2 * n - 1, 2 ** (max_depth + 1) - 1)
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    value = np.zeros(cap)
    fitted = np.zeros(n)
    goes_left = np.zeros(n, np.bool_)
    buf = np.empty(n, np.int64)

    st_node = np.empty(cap, np.int64)
    st_start = np.empty(cap, np.int64)
    st_end = np.empty(cap, np.int64)
    st_depth = np.empty(cap, np.int64)
    sp = 0
    st_node[0] = 0
    st_start[0] = 0
    st_end[0] = n
    st_depth[0] = 0
    sp = 1
    n_nodes = 1

    while sp > 0:
        sp -= 1
        node = st_node[sp]
        start = st_start[sp]
        end = st_end[sp]
        depth = st_depth[sp]
        size = end - start

        total = 0.0
        sq = 0.0
        h = 0.0
        for i in range(start, end):
            r = order[0, i]
            total += target[r]
            sq += target[r] * target[r]
            h += hess[r]

        best_f = -1
        best_thr = 0.0
        if depth < max_depth and size >= 2 * min_leaf and sq > 0.0:
            tol = tie_rtol * sq
            best_gain = tol
            parent = total * total / size
            for f in range(n_feat):
                cum = 0.0
                for i in range(start, end - 1):
                    r = order[f, i]
                    cum += target[r]
                    n_left = i - start + 1
                    n_right = size - n_left
                    if n_right < min_leaf:
                        break
                    if n_left < min_leaf:
                        continue
                    v0 = X[r, f]
                    v1 = X[order[f, i + 1], f]
                    if v0 == v1:
                        continue
                    rest = total - cum
                    gain = cum * cum / n_left + rest * rest / n_right - parent
                    if gain > best_gain + tol:
                        best_gain = gain
                        best_f = f
                        mid = 0.5 * (v0 + v1)
                        if mid >= v1:
                            mid = v0
                        best_thr = mid

        if best_f < 0:
            if h > 1e-300:
                v = newton_scale * total / h
            elif total > 0.0:
                v = clip
            elif total < 0.0:
                v = -clip
            else:
                v = 0.0
            if v > clip:
                v = clip
            elif v < -clip:
                v = -clip
            value[node] = v
            for i in range(start, end):
                fitted[order[0, i]] = v
            continue

        feature[node] = best_f
        threshold[node] = best_thr
        n_left = 0
        for i in range(start, end):
            r = order[0, i]
            goes_left[r] = X[r, best_f] <= best_thr
            if goes_left[r]:
                n_left += 1
        for f in range(n_feat):
            li = start
            ri = 0
            for i in range(start, end):
                r = order[f, i]
                if goes_left[r]:
                    order[f, li] = r
                    li += 1
                else:
                    buf[ri] = r
                    ri += 1
            for j in range(ri):
                order[f, li + j] = buf[j]

        lchild = n_nodes
        rchild = n_nodes + 1
        n_nodes += 2
        left[node] = lchild
        right[node] = rchild
        # right pushed first so the left subtree is grown first
        st_node[sp] = rchild
        st_start[sp] = start + n_left
        st_end[sp] = end
        st_depth[sp] = depth + 1
        sp += 1
        st_node[sp] = lchild
        st_start[sp] = start
        st_end[sp] = start + n_left
        st_depth[sp] = depth + 1
        sp += 1

    return (feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes],
            value[:n_nodes], fitted)


def presort(X: np.ndarray) -> np.ndarray:
    """Per-feature ascending row order, ties by row index."""
    return np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T.astype(np.int64))


def fit_tree(X: np.ndarray, target: np.ndarray, hess: np.ndarray | None = None,
             max_depth: int = 9, min_samples_leaf: int = 1, newton_scale: float = 1.0,
             leaf_clip: float = np.inf, order: np.ndarray | None = None) -> tuple[Tree, np.ndarray]:
    """Fit one squared-error regression tree.

    With ``hess`` the leaves hold ``newton_scale * sum(target) / sum(hess)``;
    with ``hess=None`` they hold the mean target.  Returns the tree and its
    predictions on the training rows.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    target = np.ascontiguousarray(target, dtype=np.float64)
    hess = np.ones_like(target) if hess is None else np.ascontiguousarray(hess, dtype=np.float64)
    if order is None:
        order = presort(X)
    parts = _grow_tree(X, order, target, hess, max_depth, min_samples_leaf,
                       newton_scale, float(leaf_clip), GAIN_TIE_RTOL)
    return Tree(*parts[:5]), parts[5]


def best_split(X: np.ndarray, target: np.ndarray, min_samples_leaf: int = 1):
    """(feature, threshold) of the root split, or None when no split reduces the error."""
    tree, _ = fit_tree(X, target, max_depth=1, min_samples_leaf=min_samples_leaf)
    if tree.feature[0] < 0:
        return None
    return int(tree.feature[0]), float(tree.threshold[0])


def _binomial_deviance(y: np.ndarray, score: np.ndarray) -> float:
    return float(np.mean(np.logaddexp(0.0, score) - y * score))


def _multinomial_deviance(y: np.ndarray, scores: np.ndarray) -> float:
    return float(np.mean(logsumexp(scores, axis=1) - scores[np.arange(y.size), y]))


@dataclass(eq=False)
class GbmModel:
    n_classes: int
    n_features: int
    loss: str
    learning_rate: float
    initial_scores: np.ndarray
    stages: list[list[Tree]] = field(default_factory=list)
    config: GbmConfig = field(default_factory=GbmConfig)
    contract_version: int | None = None
    train_deviance: list[float] = field(default_factory=list)

    @property
    def n_stages(self) -> int:
        return len(self.stages)

    def _check(self, X: np.ndarray, contract_version) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if contract_version is not None and contract_version != self.contract_version:
            raise ValueError(
                f"feature contract mismatch: model v{self.contract_version}, input v{contract_version}"
            )
        if X.shape[1] != self.n_features:
            raise ValueError(f"model expects {self.n_features} features, got {X.shape[1]}")
        return X

    def staged_scores(self, X: np.ndarray, contract_version=None):
        """Yield raw scores (n, K) or (n, 1) after the priors and after every stage."""
        X = self._check(X, contract_version)
        scores = np.tile(self.initial_scores, (X.shape[0], 1))
        yield scores.copy()
        for stage in self.stages:
            for k, tree in enumerate(stage):
                scores[:, k] += self.learning_rate * tree.predict(X)
            yield scores.copy()

    def decision_function(self, X: np.ndarray, contract_version=None) -> np.ndarray:
        X = self._check(X, contract_version)
        scores = np.tile(self.initial_scores, (X.shape[0], 1))
        for stage in self.stages:
            for k, tree in enumerate(stage):
                scores[:, k] += self.learning_rate * tree.predict(X)
        return scores

    def _proba(self, scores: np.ndarray) -> np.ndarray:
        if self.loss == BINOMIAL:
            s = scores[:, 0]
            return np.column_stack([expit(-s), expit(s)])
        return softmax(scores, axis=1)

    def predict_proba(self, X: np.ndarray, contract_version=None) -> np.ndarray:
        return self._proba(self.decision_function(X, contract_version))

    def predict(self, X: np.ndarray, contract_version=None) -> np.ndarray:
        return np.argmax(self.predict_proba(X, contract_version), axis=1)

    def deviance(self, scores: np.ndarray, y: np.ndarray) -> float:
        y = np.asarray(y, dtype=np.int64)
        if self.loss == BINOMIAL:
            return _binomial_deviance(y, scores[:, 0])
        return _multinomial_deviance(y, scores)

    def staged_deviance(self, X: np.ndarray, y: np.ndarray, contract_version=None) -> list[float]:
        """Mean deviance on (X, y) after each stage."""
        it = self.staged_scores(X, contract_version)
        next(it)
        return [self.deviance(s, y) for s in it]

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "contract_version": self.contract_version,
            "config": asdict(self.config),
            "n_classes": self.n_classes,
            "n_features": self.n_features,
            "loss": self.loss,
            "learning_rate": self.learning_rate,
            "initial_scores": self.initial_scores.tolist(),
            "train_deviance": list(self.train_deviance),
            "stages": [[t.to_dict() for t in stage] for stage in self.stages],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GbmModel":
        if d.get("format") != FORMAT_NAME or d.get("version") != FORMAT_VERSION:
            raise ValueError("not a cepairs GBM model (or unsupported version)")
        return cls(
            n_classes=d["n_classes"],
            n_features=d["n_features"],
            loss=d["loss"],
            learning_rate=d["learning_rate"],
            initial_scores=np.asarray(d["initial_scores"], dtype=np.float64),
            stages=[[Tree.from_dict(t) for t in stage] for stage in d["stages"]],
            config=GbmConfig(**d["config"]),
            contract_version=d["contract_version"],
            train_deviance=list(d["train_deviance"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def loads(cls, text: str) -> "GbmModel":
        return cls.from_dict(json.loads(text))


def fit(X: np.ndarray, y: np.ndarray, cfg: GbmConfig = GbmConfig(),
        contract_version: int | None = None) -> GbmModel:
    """Fit a boosted classifier; ``y`` holds class indices 0..K-1, all present."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("X must be (n_samples, n_features) aligned with y")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 rows")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains NaN or infinite values")
    if np.any(y != np.round(y)) or y.min() < 0:
        raise ValueError("labels must be class indices 0..K-1")
    y = y.astype(np.int64)
    n_classes = int(y.max()) + 1
    counts = np.bincount(y, minlength=n_classes)
    if n_classes < 2 or np.any(counts == 0):
        raise ValueError(f"every class 0..{max(n_classes - 1, 1)} must be present; counts={counts.tolist()}")

    loss = cfg.loss or (BINOMIAL if n_classes == 2 else MULTINOMIAL)
    if loss == BINOMIAL and n_classes != 2:
        raise ValueError("binomial deviance needs exactly two classes")

    prior = counts / y.size
    if loss == BINOMIAL:
        init = np.array([np.log(prior[1] / prior[0])])
        onehot = y[:, None].astype(np.float64)
    else:
        init = np.log(prior)
        onehot = np.eye(n_classes)[y]
    n_trees = init.size

    model = GbmModel(n_classes, X.shape[1], loss, cfg.learning_rate, init,
                     config=cfg, contract_version=contract_version)
    order = presort(X)
    scores = np.tile(init, (X.shape[0], 1))
    newton_scale = 1.0 if loss == BINOMIAL else (n_classes - 1) / n_classes
    for _ in range(cfg.n_stages):
        if loss == BINOMIAL:
            p = expit(scores)
        else:
            p = softmax(scores, axis=1)
        resid = onehot - p
        stage = []
        updates = np.empty_like(scores)
        for k in range(n_trees):
            r = resid[:, k]
            hess = p[:, k] * (1.0 - p[:, k]) if loss == BINOMIAL else np.abs(r) * (1.0 - np.abs(r))
            tree, fitted = fit_tree(X, r, hess, cfg.max_depth, cfg.min_samples_leaf,
                                    newton_scale, cfg.leaf_clip, order)
            stage.append(tree)
            updates[:, k] = fitted
        scores += cfg.learning_rate * updates
        model.stages.append(stage)
        model.train_deviance.append(model.deviance(scores, y))
    return model
