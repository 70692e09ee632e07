"""Normalization, fixed-grid quantization, probability-sorted relabeling and
grouping of y observations by the value of x."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import Variable, VariableKind


@dataclass(frozen=True)
class QuantizerConfig:
    """Grid of ``2*maxdev*sfactor + 1`` bins of width ``1/sfactor`` standard
    deviations, centred on zero and truncated at ``maxdev`` deviations."""

    sfactor: int = 3
    maxdev: int = 3

    def __post_init__(self):
        if int(self.sfactor) != self.sfactor or self.sfactor < 1:
            raise ValueError("sfactor must be a positive integer")
        if int(self.maxdev) != self.maxdev or self.maxdev < 1:
            raise ValueError("maxdev must be a positive integer")

    @property
    def half_width(self) -> int:
        return self.maxdev * self.sfactor

    @property
    def bin_count(self) -> int:
        return 2 * self.half_width + 1


DEFAULT_QUANTIZER = QuantizerConfig()


def normalize_values(x: np.ndarray) -> np.ndarray:
    """Zero mean, unit population variance. Constant input maps to zeros."""
    x = np.asarray(x, dtype=np.float64)
    centered = x - x.mean()
    std = np.sqrt(np.mean(centered * centered))
    if std == 0.0 or not np.isfinite(std):
        return np.zeros_like(x)
    z = centered / std
    # one correction pass pins the statistics down to rounding level
    z -= z.mean()
    s = np.sqrt(np.mean(z * z))
    if s > 0:
        z /= s
    return z


def normalize(v: Variable) -> Variable:
    if v.kind is not VariableKind.NUMERICAL:
        raise ValueError("normalize expects a numerical variable")
    return Variable(normalize_values(v.values), v.kind)


def quantize_values(z: np.ndarray, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> np.ndarray:
    """Map normalized values to integer bin indices in ``[0, 2*maxdev*sfactor]``.

    Bin = clamp(round(z*sfactor)) + maxdev*sfactor, rounding half away from zero.
    """
    scaled = np.asarray(z, dtype=np.float64) * cfg.sfactor
    rounded = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    k = cfg.half_width
    return (np.clip(rounded, -k, k) + k).astype(np.int64)


def quantize(v: Variable, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> Variable:
    return Variable(quantize_values(v.values, cfg).astype(np.float64), VariableKind.CATEGORICAL)


def relabel_values(codes: np.ndarray) -> np.ndarray:
    """Rename categories to 0..M-1 by non-increasing frequency.

    Ties are broken by the original code, ascending.
    """
    codes = np.asarray(codes)
    uniq, inverse, counts = np.unique(codes, return_inverse=True, return_counts=True)
    # np.unique sorts codes ascending, so a stable sort on -count keeps that tie order
    order = np.argsort(-counts, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    return rank[inverse.ravel()].astype(np.int64)


def relabel(v: Variable) -> Variable:
    return Variable(relabel_values(v.values).astype(np.float64), VariableKind.CATEGORICAL)


def discretize(v: Variable, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> np.ndarray:
    """Integer codes used by every discrete measure: raw categories, or the
    quantized normalized values of a numerical variable."""
    if v.is_categorical:
        return v.values.astype(np.int64)
    return quantize_values(normalize_values(v.values), cfg)


def numeric_view(v: Variable) -> np.ndarray:
    """Normalized real values; categories are relabeled by frequency first."""
    if v.is_categorical:
        return normalize_values(relabel_values(v.values).astype(np.float64))
    return normalize_values(v.values)


@dataclass(frozen=True)
class ConditionalTable:
    """Conditional distributions p(y | x) for every observed value of x.

    ``keys[g]`` is the x value of group ``g``; ``samples[g]`` holds the raw y
    observations of the group and ``probs[g]`` its probability vector over y
    bins after per-group preprocessing.  All vectors have length ``bin_count``.
    """

    keys: np.ndarray
    samples: tuple[np.ndarray, ...]
    probs: np.ndarray
    group_counts: np.ndarray
    bin_count: int

    @property
    def n_groups(self) -> int:
        return len(self.keys)

    @property
    def n_samples(self) -> int:
        return int(self.group_counts.sum())


def group_indices(x_codes: np.ndarray) -> tuple[np.ndarray, list[np.ndarray]]:
    """Distinct values of ``x_codes`` and, for each, the positions holding it."""
    keys, inverse = np.unique(x_codes, return_inverse=True)
    order = np.argsort(inverse, kind="stable")
    bounds = np.cumsum(np.bincount(inverse, minlength=keys.size))[:-1]
    return keys, np.split(order, bounds)


def conditional_table(x: Variable, y: Variable, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> ConditionalTable:
    """Group y by the discretized value of x.

    Numerical y: globally normalized, shifted to zero mean within each group
    and quantized on the global grid.  Categorical y: per-group frequencies
    sorted in non-increasing order and zero-padded to the largest support.
    """
    keys, groups = group_indices(discretize(x, cfg))
    raw = tuple(y.values[idx] for idx in groups)
    counts = np.array([idx.size for idx in groups], dtype=np.int64)

    if y.is_categorical:
        sorted_counts = []
        for idx in groups:
            _, c = np.unique(y.values[idx], return_counts=True)
            sorted_counts.append(np.sort(c)[::-1])
        width = max(c.size for c in sorted_counts)
        probs = np.zeros((len(groups), width))
        for g, c in enumerate(sorted_counts):
            probs[g, : c.size] = c / counts[g]
    else:
        z = normalize_values(y.values)
        width = cfg.bin_count
        probs = np.zeros((len(groups), width))
        for g, idx in enumerate(groups):
            zg = z[idx]
            bins = quantize_values(zg - zg.mean(), cfg)
            probs[g] = np.bincount(bins, minlength=width) / counts[g]

    return ConditionalTable(keys, raw, probs, counts, width)
