"""Sample counts, HSIC, slope-based IGCI, moments, Pearson r and quadratic fit."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import Pair
from .variability import standardized_moments

HSIC_MAX_SAMPLES = 500
IGCI_MIN_DY = 1e-12


def sample_counts(p: Pair) -> tuple[int, int, int]:
    return len(p), np.unique(p.a.values).size, np.unique(p.b.values).size


def subsample_indices(n: int, cap: int = HSIC_MAX_SAMPLES) -> np.ndarray:
    """Evenly spread positions, one per stratum of ``n / cap`` consecutive samples."""
    if n <= cap:
        return np.arange(n)
    return np.floor((np.arange(cap) + 0.5) * n / cap).astype(np.int64)


def _centered_gaussian_gram(x: np.ndarray) -> np.ndarray:
    d2 = (x[:, None] - x[None, :]) ** 2
    nonzero = d2[d2 > 0]
    # median of non-zero pairwise distances as bandwidth
    width = np.sqrt(np.median(nonzero)) if nonzero.size else 1.0
    k = np.exp(-d2 / (2.0 * width * width))
    row = k.mean(axis=0)
    return k - row[None, :] - row[:, None] + k.mean()


def hsic(x, y, cap: int = HSIC_MAX_SAMPLES) -> float:
    """Biased HSIC statistic tr(KHLH)/N^2 with Gaussian kernels.

    Inputs longer than ``cap`` are thinned to ``cap`` evenly spread samples.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.size != y.size:
        raise ValueError("variables must have equal lengths")
    if x.size < 4:
        return 0.0
    idx = subsample_indices(x.size, cap)
    x, y = x[idx], y[idx]
    n = x.size
    kc = _centered_gaussian_gram(x)
    lc = _centered_gaussian_gram(y)
    # tr(HKH HLH) = sum of the elementwise product of the centred Gram matrices
    return float(np.sum(kc * lc) / (n * n))


def _unit_range(v: np.ndarray) -> np.ndarray:
    lo, hi = v.min(), v.max()
    if hi <= lo:
        return np.zeros_like(v)
    return (v - lo) / (hi - lo)


def igci_slope(x, y) -> float:
    """Mean log-slope of y against x after rescaling both to [0, 1].

    Points are sorted by x, ties by y.  Steps with equal x or with
    ``|dy| <= 1e-12`` are skipped, but the mean is still over N - 1 steps.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = x.size
    if n < 3 or np.ptp(x) == 0:
        return 0.0
    x, y = _unit_range(x), _unit_range(y)
    order = np.lexsort((y, x))
    dx = np.diff(x[order])
    dy = np.abs(np.diff(y[order]))
    ok = (dx != 0) & (dy > IGCI_MIN_DY)
    if not np.any(ok):
        return 0.0
    return float(np.sum(np.log(dy[ok] / dx[ok])) / (n - 1))


def moments(a: np.ndarray, b: np.ndarray) -> tuple[float, ...]:
    """Skewness and kurtosis of each variable plus the mixed moments
    E[a b^2], E[a^2 b], E[a b^3], E[a^3 b] of the (normalized) inputs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    skew_a, kurt_a = standardized_moments(a)
    skew_b, kurt_b = standardized_moments(b)
    return (
        skew_a, skew_b, kurt_a, kurt_b,
        mixed_moment(a, b, 2), mixed_moment(b, a, 2),
        mixed_moment(a, b, 3), mixed_moment(b, a, 3),
    )


def mixed_moment(x: np.ndarray, y: np.ndarray, power: int) -> float:
    """E[x * y**power]."""
    return float(np.mean(x * y**power))


def pearson_r(x, y) -> float:
    """Sample correlation; 0 if either input is constant.

    Written so that ``pearson_r(x, y) == pearson_r(y, x)`` bit for bit.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = np.sum(dx * dx)
    syy = np.sum(dy * dy)
    denom = np.sqrt(sxx) * np.sqrt(syy)
    if denom == 0:
        return 0.0
    r = np.sum(dx * dy) / denom
    return float(np.clip(r, -1.0, 1.0))


@dataclass(frozen=True)
class PolyFit2:
    c0: float
    c1: float
    c2: float
    mse: float


def polyfit2(x, y) -> PolyFit2:
    """Least-squares fit y ~ c0 + c1 x + c2 x^2.

    Needs three distinct x values; otherwise returns c2 = 0 and mse = var(y).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.unique(x).size < 3:
        return PolyFit2(float(y.mean()), 0.0, 0.0, float(np.var(y)))
    design = np.column_stack([np.ones_like(x), x, x * x])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        return PolyFit2(float(y.mean()), 0.0, 0.0, float(np.var(y)))
    resid = y - design @ coef
    return PolyFit2(float(coef[0]), float(coef[1]), float(coef[2]), float(np.mean(resid * resid)))
