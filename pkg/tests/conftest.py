import numpy as np
import pytest

from cepairs.data_model import Pair, Variable, VariableKind


def random_variable(rng, n, kind=None):
    if kind is None:
        kind = list(VariableKind)[rng.integers(3)]
    if kind is VariableKind.NUMERICAL:
        shape = rng.integers(3)
        if shape == 0:
            return Variable(rng.normal(size=n), kind)
        if shape == 1:
            return Variable(rng.exponential(size=n) * rng.uniform(0.1, 50), kind)
        # heavy ties
        return Variable(rng.integers(0, 6, size=n).astype(float) * 0.7, kind)
    levels = 2 if kind is VariableKind.BINARY else int(rng.integers(2, 9))
    return Variable(rng.integers(0, levels, size=n).astype(float), kind)


def random_pair(rng, pid="p", n=None):
    if n is None:
        n = int(rng.integers(2, 300))
    a = random_variable(rng, n)
    b = random_variable(rng, n)
    if rng.random() < 0.5 and not a.is_categorical and not b.is_categorical:
        # make the pair dependent
        b = Variable(np.tanh(a.values) + 0.3 * rng.normal(size=n), VariableKind.NUMERICAL)
    return Pair(pid, a, b)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
