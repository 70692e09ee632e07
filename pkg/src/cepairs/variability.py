"""Spread of the conditional distributions p(Y | X=x) across values of x.

If X causes Y the conditional distributions tend to share one shape, so
low spread in the x -> y direction is evidence for that direction.
"""

from __future__ import annotations

import numpy as np

from .data_model import Variable
from .info_features import entropy_from_counts
from .preprocess import (
    DEFAULT_QUANTIZER,
    ConditionalTable,
    QuantizerConfig,
    conditional_table,
    discretize,
    group_indices,
    numeric_view,
)

MIN_GROUP_ENTROPY = 2
MIN_GROUP_SKEW = 3
MIN_GROUP_KURT = 4


def _table(x, y, cfg) -> ConditionalTable:
    if isinstance(x, ConditionalTable):
        return x
    return conditional_table(x, y, cfg)


def cds(x: Variable, y: Variable | None = None, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> float:
    """Root mean over y bins of the across-group sample variance of p_n(y | x).

    Groups are weighted equally; fewer than two groups gives 0.  ``x`` may
    also be a prebuilt :class:`ConditionalTable`.
    """
    table = _table(x, y, cfg)
    if table.n_groups < 2:
        return 0.0
    # shifting by one group leaves the variance unchanged and makes identical groups exactly 0
    per_bin = np.var(table.probs - table.probs[0], axis=0, ddof=1)
    return float(np.sqrt(np.mean(per_bin)))


def bayes_error_probability(x: Variable, y: Variable | None = None,
                            cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> float:
    """Expected error of guessing the most probable y bin given x, weighted by p(x)."""
    table = _table(x, y, cfg)
    weights = table.group_counts / table.n_samples
    return float(np.sum(weights * (1.0 - table.probs.max(axis=1))))


def standardized_moments(v: np.ndarray) -> tuple[float, float]:
    """Skewness and (non-excess) kurtosis from population central moments.

    Zero variance gives (0, 0).
    """
    v = np.asarray(v, dtype=np.float64)
    d = v - v.mean()
    m2 = np.mean(d * d)
    if m2 <= 1e-24:
        return 0.0, 0.0
    m3 = np.mean(d * d * d)
    m4 = np.mean(d * d * d * d)
    return float(m3 / m2**1.5), float(m4 / (m2 * m2))


def _spread(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    values = np.asarray(values)
    return float(np.std(values - values[0], ddof=1))


def group_entropy(probs: np.ndarray, n: int) -> float:
    """Miller-corrected entropy of a group from its probability vector and size."""
    counts = np.rint(np.asarray(probs) * n)
    return entropy_from_counts(counts[counts > 0])


def conditional_moment_spreads(x: Variable, y: Variable,
                               cfg: QuantizerConfig = DEFAULT_QUANTIZER,
                               table: ConditionalTable | None = None) -> tuple[float, float, float]:
    """Across-group standard deviations of entropy, skewness and kurtosis of y given x.

    Entropy uses the discretized conditional distributions; skewness and
    kurtosis use normalized y (relabeled codes when y is categorical).
    Groups smaller than 2, 3 and 4 observations are skipped for the
    respective statistic.
    """
    if table is None:
        table = conditional_table(x, y, cfg)
    y_num = numeric_view(y)
    # same group order as the table
    _, groups = group_indices(discretize(x, cfg))

    entropies, skews, kurts = [], [], []
    for g, idx in enumerate(groups):
        n_x = idx.size
        if n_x >= MIN_GROUP_ENTROPY:
            entropies.append(group_entropy(table.probs[g], n_x))
        if n_x >= MIN_GROUP_SKEW:
            s, k = standardized_moments(y_num[idx])
            skews.append(s)
            if n_x >= MIN_GROUP_KURT:
                kurts.append(k)
    return _spread(entropies), _spread(skews), _spread(kurts)


def hs(x, y, cfg=DEFAULT_QUANTIZER) -> float:
    return conditional_moment_spreads(x, y, cfg)[0]


def ss(x, y, cfg=DEFAULT_QUANTIZER) -> float:
    return conditional_moment_spreads(x, y, cfg)[1]


def ks(x, y, cfg=DEFAULT_QUANTIZER) -> float:
    return conditional_moment_spreads(x, y, cfg)[2]

