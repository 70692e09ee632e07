"""The 43-slot feature vector of a pair.

Directional features are computed for (a -> b) and (b -> a); symmetric ones
once.  Swapping a pair permutes the vector exactly according to
:data:`SWAP_PERMUTATION`.
"""

from __future__ import annotations

import csv
import logging
from typing import Iterable, Sequence

import numpy as np
from joblib import Parallel, delayed

from . import info_features as info
from . import misc_features as misc
from . import variability as var
from .data_model import Pair
from .preprocess import DEFAULT_QUANTIZER, QuantizerConfig, conditional_table, discretize, numeric_view

logger = logging.getLogger(__name__)

CONTRACT_VERSION = 1

FEATURE_NAMES: tuple[str, ...] = (
    "n_samples",
    "unique_a", "unique_b",
    "Hm_a", "Hm_b",
    "Hn_a", "Hn_b",
    "Hcond_b_given_a", "Hcond_a_given_b",
    "MI", "MI_joint_norm", "MI_min_norm",
    "AMI",
    "Dg_a", "Dg_b",
    "Du_a", "Du_b",
    "IGCI_ab", "IGCI_ba",
    "HSIC",
    "Pearson",
    "skew_a", "skew_b",
    "kurt_a", "kurt_b",
    "m21_ab", "m21_ba",
    "m31_ab", "m31_ba",
    "EP_ab", "EP_ba",
    "polyc2_ab", "polyc2_ba",
    "polymse_ab", "polymse_ba",
    "CDS_ab", "CDS_ba",
    "HS_ab", "HS_ba",
    "SS_ab", "SS_ba",
    "KS_ab", "KS_ba",
)
N_FEATURES = len(FEATURE_NAMES)
FEATURE_INDEX = {name: i for i, name in enumerate(FEATURE_NAMES)}

SYMMETRIC_FEATURES = frozenset(
    {"n_samples", "MI", "MI_joint_norm", "MI_min_norm", "AMI", "HSIC", "Pearson"}
)


def _twin(name: str) -> str:
    for own, other in (("_b_given_a", "_a_given_b"), ("_a_given_b", "_b_given_a"),
                       ("_ab", "_ba"), ("_ba", "_ab"), ("_a", "_b"), ("_b", "_a")):
        if name.endswith(own):
            return name[: -len(own)] + other
    return name


# slot i of a swapped pair's vector holds slot SWAP_PERMUTATION[i] of the original
SWAP_PERMUTATION = np.array([FEATURE_INDEX[_twin(n)] for n in FEATURE_NAMES], dtype=np.int64)

BASELINE_FEATURES: tuple[str, ...] = FEATURE_NAMES[:21]
STATISTICS_FEATURES: tuple[str, ...] = FEATURE_NAMES[21:35]
VARIABILITY_FEATURES: tuple[str, ...] = FEATURE_NAMES[35:]

FEATURE_SETS = {
    "full": FEATURE_NAMES,
    "baseline": BASELINE_FEATURES,
    "baseline+statistics": BASELINE_FEATURES + STATISTICS_FEATURES,
    "baseline+variability": BASELINE_FEATURES + VARIABILITY_FEATURES,
}


def feature_indices(names: Iterable[str]) -> np.ndarray:
    return np.array([FEATURE_INDEX[n] for n in names], dtype=np.int64)


def swap_features(f: np.ndarray) -> np.ndarray:
    """Feature vector(s) of the swapped pair(s), given the originals (last axis = 43 slots)."""
    return np.asarray(f)[..., SWAP_PERMUTATION]


def _directional(x, y, xd, yd, xn, yn, cfg) -> dict[str, float]:
    table = conditional_table(x, y, cfg)
    hs, ss, ks = var.conditional_moment_spreads(x, y, cfg, table=table)
    fit = misc.polyfit2(xn, yn)
    return {
        "Hcond": info.conditional_entropy(yd, xd),
        "IGCI": misc.igci_slope(xn, yn),
        "m21": misc.mixed_moment(xn, yn, 2),
        "m31": misc.mixed_moment(xn, yn, 3),
        "EP": var.bayes_error_probability(table),
        "polyc2": abs(fit.c2),
        "polymse": fit.mse,
        "CDS": var.cds(table),
        "HS": hs,
        "SS": ss,
        "KS": ks,
    }


def _marginal(v, vd, vn) -> dict[str, float]:
    skew, kurt = var.standardized_moments(vn)
    return {
        "Hm": info.discrete_entropy(vd),
        "Hn": info.normalized_entropy(vd),
        "Dg": info.gaussian_divergence(vn),
        "Du": info.uniform_divergence(vn),
        "skew": skew,
        "kurt": kurt,
    }


def extract(p: Pair, cfg: QuantizerConfig = DEFAULT_QUANTIZER) -> np.ndarray:
    """The 43 features of one pair, ordered as :data:`FEATURE_NAMES`.

    Non-finite intermediate values are replaced by 0.
    """
    if len(p) < 2:
        raise ValueError(f"pair {p.id}: insufficient data")
    a, b = p.a, p.b
    ad, bd = discretize(a, cfg), discretize(b, cfg)
    an, bn = numeric_view(a), numeric_view(b)

    n, ua, ub = misc.sample_counts(p)
    mi, mi_joint, mi_min = info.mutual_information(ad, bd)
    values = {
        "n_samples": n,
        "unique_a": ua,
        "unique_b": ub,
        "MI": mi,
        "MI_joint_norm": mi_joint,
        "MI_min_norm": mi_min,
        "AMI": info.adjusted_mutual_information(ad, bd),
        "HSIC": misc.hsic(an, bn),
        "Pearson": misc.pearson_r(an, bn),
    }
    for suffix, v, vd, vn in (("_a", a, ad, an), ("_b", b, bd, bn)):
        for key, val in _marginal(v, vd, vn).items():
            values[key + suffix] = val
    for key, val in _directional(a, b, ad, bd, an, bn, cfg).items():
        values[key + ("_b_given_a" if key == "Hcond" else "_ab")] = val
    for key, val in _directional(b, a, bd, ad, bn, an, cfg).items():
        values[key + ("_a_given_b" if key == "Hcond" else "_ba")] = val

    out = np.array([values[name] for name in FEATURE_NAMES], dtype=np.float64)
    bad = ~np.isfinite(out)
    if bad.any():
        logger.debug("pair %s: non-finite %s replaced by 0", p.id,
                     [FEATURE_NAMES[i] for i in np.flatnonzero(bad)])
        out[bad] = 0.0
    return out


def _extract_one(p: Pair, cfg: QuantizerConfig) -> np.ndarray:
    try:
        return extract(p, cfg)
    except Exception as exc:
        raise ValueError(f"feature extraction failed for pair {p.id!r}: {exc}") from exc


def extract_batch(pairs: Sequence[Pair], cfg: QuantizerConfig = DEFAULT_QUANTIZER,
                  n_jobs: int = 1) -> np.ndarray:
    """Feature matrix with one row per pair, in input order."""
    pairs = list(pairs)
    if not pairs:
        return np.zeros((0, N_FEATURES))
    if n_jobs == 1:
        rows = [_extract_one(p, cfg) for p in pairs]
    else:
        rows = Parallel(n_jobs=n_jobs)(delayed(_extract_one)(p, cfg) for p in pairs)
    return np.vstack(rows)


def write_features_csv(path, ids: Sequence[str], features: np.ndarray) -> None:
    """CSV with a ``SampleID`` column followed by the contract names; floats in repr form."""
    features = np.asarray(features)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["SampleID", *FEATURE_NAMES])
        for pid, row in zip(ids, features):
            writer.writerow([pid, *(repr(float(v)) for v in row)])


def read_features_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header[1:]) != FEATURE_NAMES:
            raise ValueError(f"{path}: header does not match feature contract v{CONTRACT_VERSION}")
        ids, rows = [], []
        for row in reader:
            ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return ids, np.array(rows, dtype=np.float64).reshape(-1, N_FEATURES)
