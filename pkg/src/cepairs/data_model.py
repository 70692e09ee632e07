"""Value types shared across the package: variables, pairs, labels, datasets."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np


class VariableKind(str, Enum):
    NUMERICAL = "Numerical"
    CATEGORICAL = "Categorical"
    BINARY = "Binary"

    @property
    def is_categorical(self) -> bool:
        # Binary is handled exactly like Categorical by every feature
        return self is not VariableKind.NUMERICAL

    @classmethod
    def parse(cls, text: str) -> "VariableKind":
        try:
            return cls(text.strip())
        except ValueError:
            raise ValueError(f"unknown variable type {text!r}") from None


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("variable values must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Variable:
    """One observed variable: real-encoded values plus their kind.

    Categorical values must be label-encoded non-negative integers.
    """

    values: np.ndarray
    kind: VariableKind = VariableKind.NUMERICAL

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.size == 0:
            raise ValueError("variable has no observations")
        if not np.all(np.isfinite(arr)):
            raise ValueError("variable contains missing or non-finite values")
        kind = VariableKind(self.kind)
        if kind.is_categorical and (np.any(arr < 0) or np.any(arr != np.round(arr))):
            raise ValueError("categorical values must be non-negative integer codes")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "kind", kind)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Variable):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.values, other.values)

    @property
    def is_categorical(self) -> bool:
        return self.kind.is_categorical

    @classmethod
    def from_raw(cls, raw: Sequence, kind: VariableKind | str) -> "Variable":
        """Build a variable from raw observations.

        Categorical raw labels of any hashable type are mapped to dense codes
        0..M-1 in order of first appearance.
        """
        kind = VariableKind(kind)
        if not kind.is_categorical:
            return cls(np.asarray(raw, dtype=np.float64), kind)
        codes: dict = {}
        encoded = [codes.setdefault(v, len(codes)) for v in raw]
        return cls(np.asarray(encoded, dtype=np.float64), kind)


@dataclass(frozen=True)
class Pair:
    id: str
    a: Variable
    b: Variable

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError(
                f"pair {self.id}: A has {len(self.a)} values but B has {len(self.b)}"
            )
        if len(self.a) < 2:
            raise ValueError(f"pair {self.id}: insufficient data (need at least 2 samples)")

    def __len__(self) -> int:
        return len(self.a)


SWAP_SUFFIX = "~swap"


def swap(p: Pair) -> Pair:
    """Exchange the two variables of a pair.

    The id gains (or loses) a suffix so swapped copies never collide with
    their originals; swapping twice gives back the original id.
    """
    if p.id.endswith(SWAP_SUFFIX):
        new_id = p.id[: -len(SWAP_SUFFIX)]
    else:
        new_id = p.id + SWAP_SUFFIX
    return Pair(new_id, p.b, p.a)


def swap_label(label: int) -> int:
    return -int(label)


def check_label(label) -> int:
    value = int(label)
    if value != label or value not in (-1, 0, 1):
        raise ValueError(f"ternary label must be -1, 0 or +1, got {label!r}")
    return value


@dataclass(frozen=True)
class LabeledDataset:
    """Pairs with optional aligned ternary labels (+1: A->B, -1: B->A, 0: neither)."""

    pairs: tuple[Pair, ...]
    labels: tuple[int, ...] | None = None
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        pairs = tuple(self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if self.labels is not None:
            labels = tuple(check_label(v) for v in self.labels)
            if len(labels) != len(pairs):
                raise ValueError(f"{len(pairs)} pairs but {len(labels)} labels")
            object.__setattr__(self, "labels", labels)
        index = {}
        for i, p in enumerate(pairs):
            if p.id in index:
                raise ValueError(f"duplicate pair id {p.id!r}")
            index[p.id] = i
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def ids(self) -> list[str]:
        return [p.id for p in self.pairs]

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    def label_array(self) -> np.ndarray:
        if self.labels is None:
            raise ValueError("dataset has no labels")
        return np.asarray(self.labels, dtype=np.int64)

    def index_of(self, pair_id: str) -> int:
        return self._index[pair_id]

    def subset(self, indices) -> "LabeledDataset":
        indices = [int(i) for i in indices]
        labels = None if self.labels is None else [self.labels[i] for i in indices]
        return LabeledDataset(tuple(self.pairs[i] for i in indices), labels)
