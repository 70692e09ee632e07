"""Information-theoretic measures.

Discrete measures use the plug-in estimator with the Miller-Madow bias
correction ``(M - 1) / (2N)``, natural logarithms throughout.  Sums go
through :func:`math.fsum`, so every value depends only on the multiset of
counts; this makes the symmetric measures exactly symmetric in floating point.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .data_model import Variable
from .preprocess import DEFAULT_QUANTIZER, discretize, normalize_values

SPACING_FLOOR = 1e-12
HALF_LOG_2PIE = 0.5 * math.log(2 * math.pi * math.e)


def _codes(v) -> np.ndarray:
    if isinstance(v, Variable):
        return discretize(v, DEFAULT_QUANTIZER)
    return np.asarray(v)


def _plugin_from_counts(counts: np.ndarray) -> float:
    n = counts.sum()
    p = counts / n
    return -math.fsum((p * np.log(p)).tolist())


def entropy_from_counts(counts: np.ndarray) -> float:
    n = counts.sum()
    return _plugin_from_counts(counts) + (counts.size - 1) / (2.0 * n)


def _counts(codes: np.ndarray) -> np.ndarray:
    return np.unique(codes, return_counts=True)[1]


def _joint_counts(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    if x.shape != y.shape:
        raise ValueError("variables must have equal lengths")
    return np.unique(np.column_stack([x, y]), axis=0, return_counts=True)[1]


def discrete_entropy(v) -> float:
    """Miller-corrected entropy of a discrete sample, in nats."""
    return entropy_from_counts(_counts(_codes(v)))


def normalized_entropy(v) -> float:
    """Corrected entropy divided by ln(N). Can exceed 1 when all values are distinct."""
    codes = _codes(v)
    if codes.size < 2:
        return 0.0
    return discrete_entropy(codes) / math.log(codes.size)


def joint_entropy(x, y) -> float:
    return entropy_from_counts(_joint_counts(_codes(x), _codes(y)))


def conditional_entropy(y, x) -> float:
    """H(Y | X) = H(X, Y) - H(X). Correction terms can make it slightly negative."""
    x, y = _codes(x), _codes(y)
    return joint_entropy(x, y) - discrete_entropy(x)


def mutual_information(x, y) -> tuple[float, float, float]:
    """Corrected MI and its normalizations by H(X,Y) and by min(H(X), H(Y)).

    Zero denominators give 0.
    """
    x, y = _codes(x), _codes(y)
    hx, hy = discrete_entropy(x), discrete_entropy(y)
    hxy = joint_entropy(x, y)
    mi = (hx + hy) - hxy
    joint_norm = mi / hxy if hxy != 0 else 0.0
    hmin = min(hx, hy)
    min_norm = mi / hmin if hmin != 0 else 0.0
    return mi, joint_norm, min_norm


def expected_mutual_information(row_sums, col_sums) -> float:
    """Expected plug-in MI of a contingency table with the given margins under
    the hypergeometric (random permutation) model."""
    row_sums = np.asarray(row_sums, dtype=np.int64)
    col_sums = np.asarray(col_sums, dtype=np.int64)
    n = int(row_sums.sum())
    if n != int(col_sums.sum()):
        raise ValueError("margins must have the same total")
    ra, rm = np.unique(row_sums, return_counts=True)
    ca, cm = np.unique(col_sums, return_counts=True)
    log_n_fact = gammaln(n + 1)
    parts = []
    for a, ma in zip(ra.tolist(), rm.tolist()):
        for b, mb in zip(ca.tolist(), cm.tolist()):
            lo, hi = (a, b) if a <= b else (b, a)
            nij = np.arange(max(1, lo + hi - n), lo + 1, dtype=np.float64)
            if nij.size == 0:
                continue
            log_p = (
                gammaln(lo + 1) + gammaln(hi + 1) + gammaln(n - lo + 1) + gammaln(n - hi + 1)
                - log_n_fact - gammaln(nij + 1) - gammaln(lo - nij + 1)
                - gammaln(hi - nij + 1) - gammaln(n - lo - hi + nij + 1)
            )
            terms = nij / n * np.log(n * nij / (float(lo) * hi)) * np.exp(log_p)
            parts.append(ma * mb * float(np.sum(terms)))
    return math.fsum(parts)


def adjusted_mutual_information(x, y) -> float:
    """MI adjusted for chance, normalized by max(H(X), H(Y)).

    Uses plug-in (uncorrected) entropies.  A zero denominator gives 0, which
    covers constant variables.
    """
    x, y = _codes(x), _codes(y)
    _, xi = np.unique(x, return_inverse=True)
    _, yi = np.unique(y, return_inverse=True)
    row = np.bincount(xi.ravel())
    col = np.bincount(yi.ravel())
    if row.size == 1 or col.size == 1:
        return 0.0
    hx, hy = _plugin_from_counts(row), _plugin_from_counts(col)
    mi = (hx + hy) - _plugin_from_counts(_joint_counts(x, y))
    emi = expected_mutual_information(row, col)
    denom = max(hx, hy) - emi
    if abs(denom) < 1e-12:
        return 0.0
    return (mi - emi) / denom


def _numeric(x) -> np.ndarray:
    """Raw float values of an array or a :class:`Variable`."""
    return np.asarray(x.values if isinstance(x, Variable) else x, dtype=np.float64)


def differential_entropy(x) -> float:
    """m-spacing estimate of the differential entropy of a 1-D sample, m = round(sqrt(N))."""
    x = np.sort(_numeric(x))
    n = x.size
    if n < 4:
        return 0.0
    m = int(math.floor(math.sqrt(n) + 0.5))
    spacings = np.maximum(x[m:] - x[:-m], SPACING_FLOOR)
    return float(np.mean(np.log((n + 1) / m * spacings)))


def gaussian_divergence(x) -> float:
    """Entropy of the standardized sample minus that of a standard normal.

    Sign follows H(X) - H(G); constant input gives 0.
    """
    x = _numeric(x)
    if x.size == 0 or np.ptp(x) == 0:
        return 0.0
    return differential_entropy(normalize_values(x)) - HALF_LOG_2PIE


def uniform_divergence(x) -> float:
    """Entropy of the sample rescaled to [0, 1]; constant input gives 0."""
    x = _numeric(x)
    if x.size == 0:
        return 0.0
    lo, hi = x.min(), x.max()
    if hi <= lo:
        return 0.0
    return differential_entropy((x - lo) / (hi - lo))
