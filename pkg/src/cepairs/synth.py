"""Seeded generator of labeled synthetic cause-effect pairs.

Causal pairs follow Y = f(X) + noise; anticausal pairs are causal pairs with
the variables exchanged; independent pairs are two unrelated draws;
confounded pairs are two noisy functions of a shared latent variable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data_model import LabeledDataset, Pair, Variable, VariableKind

MECHANISMS = ("linear", "quadratic", "monotone")
NOISES = ("gaussian", "uniform")
CAUSE_SHAPES = ("uniform", "mixture", "gamma", "student")


@dataclass(frozen=True)
class SynthConfig:
    n_pairs: int = 400
    causal: float = 0.4
    anticausal: float = 0.4
    independent: float = 0.1
    confounded: float = 0.1
    mechanisms: tuple[str, ...] = MECHANISMS
    noises: tuple[str, ...] = NOISES
    min_samples: int = 500
    max_samples: int = 500
    noise_range: tuple[float, float] = (0.1, 0.5)
    categorical_fraction: float = 0.0
    seed: int = 1

    def __post_init__(self):
        fractions = (self.causal, self.anticausal, self.independent, self.confounded)
        if min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
            raise ValueError("class fractions must be non-negative and sum to 1")
        if not set(self.mechanisms) <= set(MECHANISMS) or not self.mechanisms:
            raise ValueError(f"mechanisms must be a non-empty subset of {MECHANISMS}")
        if not set(self.noises) <= set(NOISES) or not self.noises:
            raise ValueError(f"noises must be a non-empty subset of {NOISES}")
        if not 2 <= self.min_samples <= self.max_samples:
            raise ValueError("need 2 <= min_samples <= max_samples")
        if not 0 <= self.categorical_fraction <= 1:
            raise ValueError("categorical_fraction must lie in [0, 1]")

    def class_counts(self) -> dict[str, int]:
        """Largest-remainder rounding of the fractions to ``n_pairs``."""
        names = ("causal", "anticausal", "independent", "confounded")
        exact = np.array([getattr(self, k) for k in names]) * self.n_pairs
        counts = np.floor(exact).astype(int)
        order = np.argsort(-(exact - counts), kind="stable")
        counts[order[: self.n_pairs - counts.sum()]] += 1
        return dict(zip(names, counts.tolist()))


def _standardize(v: np.ndarray) -> np.ndarray:
    s = v.std()
    return (v - v.mean()) / s if s > 0 else v - v.mean()


def _draw_cause(rng: np.random.Generator, n: int) -> np.ndarray:
    shape = CAUSE_SHAPES[rng.integers(len(CAUSE_SHAPES))]
    if shape == "uniform":
        x = rng.uniform(-1, 1, n)
    elif shape == "mixture":
        k = int(rng.integers(2, 5))
        centers = rng.normal(0, 2, k)
        widths = rng.uniform(0.2, 1.0, k)
        comp = rng.integers(k, size=n)
        x = rng.normal(centers[comp], widths[comp])
    elif shape == "gamma":
        x = rng.gamma(rng.uniform(1, 4), 1.0, n) * rng.choice([-1, 1])
    else:
        x = rng.standard_t(rng.uniform(3, 8), n)
    return _standardize(x)


def _mechanism(rng: np.random.Generator, name: str, x: np.ndarray) -> np.ndarray:
    if name == "linear":
        y = rng.choice([-1, 1]) * rng.uniform(0.5, 2.0) * x
    elif name == "quadratic":
        c = rng.uniform(-0.5, 0.5)
        y = (x - c) ** 2
    else:
        kind = int(rng.integers(3))
        if kind == 0:
            y = np.exp(rng.uniform(0.5, 1.2) * x)
        elif kind == 1:
            y = np.tanh(rng.uniform(1.0, 2.5) * x)
        else:
            y = x ** 3 + rng.uniform(0.0, 1.0) * x
    return _standardize(y)


def _noise(rng: np.random.Generator, name: str, n: int) -> np.ndarray:
    if name == "gaussian":
        return rng.normal(size=n)
    return rng.uniform(-np.sqrt(3), np.sqrt(3), n)


def _effect(rng, cfg: SynthConfig, x: np.ndarray) -> np.ndarray:
    mech = cfg.mechanisms[rng.integers(len(cfg.mechanisms))]
    noise = cfg.noises[rng.integers(len(cfg.noises))]
    level = rng.uniform(*cfg.noise_range)
    return _mechanism(rng, mech, x) + level * _noise(rng, noise, x.size)


def _as_variable(rng, cfg: SynthConfig, v: np.ndarray) -> Variable:
    if cfg.categorical_fraction > 0 and rng.random() < cfg.categorical_fraction:
        levels = int(rng.integers(2, 8))
        edges = np.quantile(v, np.linspace(0, 1, levels + 1)[1:-1])
        codes = np.searchsorted(edges, v)
        kind = VariableKind.BINARY if levels == 2 else VariableKind.CATEGORICAL
        return Variable.from_raw(codes.tolist(), kind)
    return Variable(np.round(v, 6), VariableKind.NUMERICAL)


def generate_synthetic(cfg: SynthConfig = SynthConfig()) -> LabeledDataset:
    """A shuffled labeled dataset; the same config always gives the same data."""
    rng = np.random.default_rng(cfg.seed)
    kinds = []
    for name, count in cfg.class_counts().items():
        kinds += [name] * count
    kinds = [kinds[i] for i in rng.permutation(len(kinds))]

    pairs, labels = [], []
    for i, kind in enumerate(kinds):
        n = int(rng.integers(cfg.min_samples, cfg.max_samples + 1))
        if kind in ("causal", "anticausal"):
            a = _draw_cause(rng, n)
            b = _effect(rng, cfg, a)
            label = 1
            if kind == "anticausal":
                a, b, label = b, a, -1
        elif kind == "independent":
            a, b, label = _draw_cause(rng, n), _draw_cause(rng, n), 0
        else:
            z = _draw_cause(rng, n)
            a, b, label = _effect(rng, cfg, z), _effect(rng, cfg, z), 0
        pairs.append(Pair(f"synth{i + 1}", _as_variable(rng, cfg, a), _as_variable(rng, cfg, b)))
        labels.append(label)
    return LabeledDataset(tuple(pairs), tuple(labels))
