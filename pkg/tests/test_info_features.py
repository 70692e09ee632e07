import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cepairs.data_model import Variable, VariableKind
from cepairs.info_features import (
    HALF_LOG_2PIE,
    adjusted_mutual_information,
    conditional_entropy,
    differential_entropy,
    discrete_entropy,
    expected_mutual_information,
    gaussian_divergence,
    joint_entropy,
    mutual_information,
    normalized_entropy,
    uniform_divergence,
)

from oracles import entropy_counting, expected_mi_by_permutation, plugin_entropy_counting, plugin_mi_counting

small_codes = st.lists(st.integers(0, 5), min_size=1, max_size=30)


def test_entropy_examples():
    assert discrete_entropy([3, 3, 3]) == 0.0
    assert discrete_entropy([0, 0, 1, 1]) == pytest.approx(math.log(2) + 1 / 8, abs=1e-12)
    assert discrete_entropy([0, 1, 2, 3]) == pytest.approx(1.7612943611198906, abs=1e-12)


def test_entropy_accepts_variables():
    v = Variable([5, 5, 9, 9], VariableKind.CATEGORICAL)
    assert discrete_entropy(v) == discrete_entropy([0, 0, 1, 1])


def test_normalized_entropy_examples():
    assert normalized_entropy([1, 1, 1]) == 0.0
    assert normalized_entropy([0, 0, 1, 1]) == pytest.approx(0.5901684400555602, abs=1e-12)
    # can exceed one when every value is distinct
    assert normalized_entropy([0, 1, 2, 3]) == pytest.approx(1.2705053201666807, abs=1e-12)
    assert normalized_entropy([4]) == 0.0


def test_joint_entropy_examples():
    x = [0, 0, 1, 1, 2]
    assert joint_entropy(x, x) == discrete_entropy(x)
    assert joint_entropy([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(math.log(4) + 3 / 8, abs=1e-12)
    y = [3, 1, 4, 1, 5]
    assert joint_entropy([7] * 5, y) == discrete_entropy(y)


def test_conditional_entropy_examples():
    x = [0, 0, 1, 1, 2, 2]
    assert conditional_entropy(x, x) == 0.0
    y = [1, 2, 2, 3, 3, 3]
    assert conditional_entropy(y, [9] * 6) == discrete_entropy(y)
    # y = 2x: only the correction residue is left, which is zero with equal supports
    assert conditional_entropy([2 * v for v in x], x) == pytest.approx(0.0, abs=1e-15)


def test_mutual_information_examples():
    mi, jn, mn = mutual_information([0, 0, 1, 1], [0, 0, 1, 1])
    assert mi == pytest.approx(math.log(2) + 1 / 8, abs=1e-12)
    assert jn == pytest.approx(1.0) and mn == pytest.approx(1.0)
    mi, _, _ = mutual_information([0, 0, 1, 1], [0, 1, 0, 1])
    assert mi == pytest.approx(2 * (math.log(2) + 1 / 8) - (math.log(4) + 3 / 8), abs=1e-12)
    assert mi == pytest.approx(-0.125, abs=1e-12)
    assert mutual_information([1, 1, 1, 1], [0, 1, 2, 0]) == (0.0, 0.0, 0.0)


@settings(max_examples=300)
@given(small_codes.flatmap(lambda x: st.tuples(st.just(x), st.lists(st.integers(0, 5), min_size=len(x), max_size=len(x)))))
def test_entropy_family_against_counting_oracle(xy):
    x, y = xy
    n = len(x)
    assert discrete_entropy(x) == pytest.approx(entropy_counting(x), abs=1e-12)
    assert joint_entropy(x, y) == pytest.approx(entropy_counting(list(zip(x, y))), abs=1e-12)
    mi, _, _ = mutual_information(x, y)
    mx, my, mxy = len(set(x)), len(set(y)), len(set(zip(x, y)))
    plugin = plugin_mi_counting(x, y)
    assert plugin >= -1e-12
    assert mi == pytest.approx(plugin + (mx + my - mxy - 1) / (2 * n), abs=1e-12)
    assert discrete_entropy(x) >= 0


@settings(max_examples=200)
@given(small_codes.flatmap(lambda x: st.tuples(st.just(x), st.lists(st.integers(0, 5), min_size=len(x), max_size=len(x)))))
def test_symmetry_is_exact(xy):
    x, y = xy
    assert mutual_information(x, y) == mutual_information(y, x)
    assert joint_entropy(x, y) == joint_entropy(y, x)
    assert adjusted_mutual_information(x, y) == adjusted_mutual_information(y, x)


def test_ami_examples():
    assert adjusted_mutual_information([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0
    assert adjusted_mutual_information([4, 4, 4, 4], [0, 1, 0, 1]) == 0.0
    assert adjusted_mutual_information([4, 4, 4, 4], [1, 1, 1, 1]) == 0.0


def _ami_by_permutation(x, y):
    emi = expected_mi_by_permutation(x, y)
    mi = plugin_mi_counting(x, y)
    hmax = max(plugin_entropy_counting(x), plugin_entropy_counting(y))
    return (mi - emi) / (hmax - emi)


def test_ami_against_permutation_oracle_worked_example():
    x, y = [0, 0, 1, 1], [0, 1, 0, 1]
    expected = _ami_by_permutation(x, y)
    assert adjusted_mutual_information(x, y) == pytest.approx(expected, abs=1e-12)
    # MI is 0 and E[MI] = ln2/3 here, so AMI = -(ln2/3) / (ln2 - ln2/3) = -1/2
    assert expected == pytest.approx(-0.5, abs=1e-12)


@pytest.mark.parametrize("seed", range(12))
def test_expected_mi_against_permutation_oracle(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(3, 8))
    x = r.integers(0, 3, n).tolist()
    y = r.integers(0, 3, n).tolist()
    rows = np.unique(x, return_counts=True)[1]
    cols = np.unique(y, return_counts=True)[1]
    assert expected_mutual_information(rows, cols) == pytest.approx(expected_mi_by_permutation(x, y), abs=1e-12)
    if len(set(x)) > 1 and len(set(y)) > 1:
        assert adjusted_mutual_information(x, y) == pytest.approx(_ami_by_permutation(x, y), abs=1e-9)


@pytest.mark.parametrize("seed", range(20))
def test_ami_matches_scikit_learn(seed):
    metrics = pytest.importorskip("sklearn.metrics")
    r = np.random.default_rng(seed)
    n = int(r.integers(10, 300))
    x = r.integers(0, int(r.integers(2, 10)), n)
    y = (x + r.integers(0, 3, n)) % int(r.integers(2, 8))
    if np.unique(x).size < 2 or np.unique(y).size < 2:
        return
    ref = metrics.adjusted_mutual_info_score(x, y, average_method="max")
    assert adjusted_mutual_information(x, y) == pytest.approx(ref, abs=1e-9)


def test_ami_relabel_invariance(rng):
    x = rng.integers(0, 4, 60)
    y = (x + rng.integers(0, 2, 60)) % 5
    renamed = np.array([7, 3, 11, 0, 2])[y]
    assert adjusted_mutual_information(x, y) == pytest.approx(adjusted_mutual_information(x, renamed), abs=1e-12)


@pytest.mark.parametrize("seed", range(3))
def test_differential_entropy_analytic(seed):
    r = np.random.default_rng(seed)
    assert differential_entropy(r.uniform(size=10_000)) == pytest.approx(0.0, abs=0.05)
    assert differential_entropy(r.normal(size=10_000)) == pytest.approx(HALF_LOG_2PIE, abs=0.05)


def test_differential_entropy_scaling_law(rng):
    x = rng.normal(size=10_000)
    for s in (0.01, 3.0, 250.0):
        assert differential_entropy(s * x) - differential_entropy(x) == pytest.approx(math.log(s), abs=0.05)


def test_differential_entropy_small_sample():
    assert differential_entropy([1.0, 2.0, 3.0]) == 0.0


def test_gaussian_divergence_examples(rng):
    assert gaussian_divergence(rng.normal(size=10_000)) == pytest.approx(0.0, abs=0.05)
    # unit-variance uniform has entropy ln(sqrt(12))
    expected = math.log(math.sqrt(12)) - HALF_LOG_2PIE
    assert expected == pytest.approx(-0.1765, abs=1e-4)
    assert gaussian_divergence(rng.uniform(size=10_000)) == pytest.approx(expected, abs=0.05)
    assert gaussian_divergence([2.0] * 10) == 0.0


def test_gaussian_divergence_not_invariant_to_monotone_maps(rng):
    x = rng.normal(size=5000)
    assert abs(gaussian_divergence(np.exp(x)) - gaussian_divergence(x)) > 0.1


def test_uniform_divergence_examples(rng):
    assert uniform_divergence(rng.uniform(-4, 9, size=10_000)) == pytest.approx(0.0, abs=0.05)
    assert uniform_divergence([3.0] * 20) == 0.0
    # symmetric triangular on [0, 1] has entropy 1/2 - ln 2 < 0
    tri = rng.triangular(0, 0.5, 1, size=10_000)
    assert uniform_divergence(tri) == pytest.approx(0.5 - math.log(2), abs=0.05)
    assert uniform_divergence(tri) < 0
