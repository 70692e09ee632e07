import numpy as np
import pytest
from scipy.stats import spearmanr

from cepairs.data_model import LabeledDataset, swap
from cepairs.ensemble import (
    MODEL_NAMES,
    EnsembleModel,
    augment,
    augment_features,
    scheme_scores_from_probabilities,
    train,
    train_features,
)
from cepairs.features import BASELINE_FEATURES, SWAP_PERMUTATION, extract_batch
from cepairs.gbm import GbmConfig
from cepairs.synth import SynthConfig, generate_synthetic

CFG = GbmConfig(n_stages=25, max_depth=4)


@pytest.fixture(scope="module")
def data():
    ds = generate_synthetic(SynthConfig(n_pairs=120, min_samples=150, max_samples=150, seed=3))
    return ds, extract_batch(ds.pairs)


@pytest.fixture(scope="module")
def model(data):
    ds, F = data
    return train_features(F, ds.label_array(), CFG)


def _uniform(n):
    return {
        "scheme1": np.full((n, 3), 1 / 3),
        **{name: np.full((n, 2), 0.5) for name in MODEL_NAMES[1:]},
    }


def test_augment_doubles_and_mirrors(data):
    ds, _ = data
    aug = augment(ds)
    assert len(aug) == 2 * len(ds)
    labels = aug.label_array()
    for c in (-1, 0, 1):
        assert np.sum(labels == c) == np.sum(ds.label_array() == c) + np.sum(ds.label_array() == -c)
    assert aug.pairs[len(ds)] == swap(ds.pairs[0])
    assert len(augment(LabeledDataset((), ()))) == 0
    with pytest.raises(ValueError):
        augment(LabeledDataset(ds.pairs))


def test_augment_features_matches_augment(data):
    ds, F = data
    sub = ds.subset(range(6))
    G, labels = augment_features(F[:6], sub.label_array())
    assert np.array_equal(G, extract_batch(augment(sub).pairs))
    assert np.array_equal(labels, augment(sub).label_array())


def test_score_formulas():
    probs = _uniform(1)
    assert np.array_equal(scheme_scores_from_probabilities(probs), [[0.0, 0.0, 0.0]])
    probs["scheme1"] = np.array([[0.0, 0.0, 1.0]])
    s = scheme_scores_from_probabilities(probs)
    assert np.array_equal(s, [[1.0, 0.0, 0.0]])
    assert s @ np.full(3, 1 / 3) == pytest.approx(1 / 3)

    probs = {
        "scheme1": np.array([[0.2, 0.3, 0.5]]),
        "scheme2_direction": np.array([[0.1, 0.9]]),
        "scheme2_dependence": np.array([[0.75, 0.25]]),
        "scheme3_pos": np.array([[0.4, 0.6]]),
        "scheme3_neg": np.array([[0.8, 0.2]]),
    }
    np.testing.assert_allclose(scheme_scores_from_probabilities(probs), [[0.3, 0.8 * 0.75, 0.2]], atol=1e-15)


def test_scores_bounded_and_weights(model, data):
    _, F = data
    S = model.scheme_scores(F)
    assert S.shape == (len(F), 3)
    assert np.all(np.abs(S) <= 1.0)
    assert np.all(np.abs(model.score(F)) <= 1.0)
    assert np.array_equal(model.with_weights((1, 0, 0)).score(F), S[:, 0])
    np.testing.assert_allclose(model.score(F), S.mean(axis=1), atol=1e-15)
    with pytest.raises(ValueError):
        model.with_weights((0.5, 0.5, 0.5))


def test_near_antisymmetry(model, data):
    _, F = data
    forward = model.score(F)
    backward = model.score(F[:, SWAP_PERMUTATION])
    rho, _ = spearmanr(forward, -backward)
    assert rho > 0.95


def test_roundtrip(model, data, tmp_path):
    _, F = data
    path = tmp_path / "model.json"
    model.save(path)
    again = EnsembleModel.load(path)
    assert np.array_equal(again.score(F), model.score(F))
    assert again.dumps() == model.dumps()


def test_feature_subset_model(data):
    ds, F = data
    m = train_features(F, ds.label_array(), GbmConfig(n_stages=3, max_depth=2), BASELINE_FEATURES)
    assert m.models["scheme1"].n_features == len(BASELINE_FEATURES)
    assert m.score(F).shape == (len(F),)


def test_train_from_dataset_equals_feature_path(data):
    ds, F = data
    sub = ds.subset(range(40))
    cfg = GbmConfig(n_stages=3, max_depth=2)
    a = train(sub, cfg)
    b = train_features(F[:40], sub.label_array(), cfg)
    assert a.dumps() == b.dumps()


def test_missing_class_rejected(data):
    ds, F = data
    labels = ds.label_array()
    keep = labels != 0
    with pytest.raises(ValueError, match="class 0"):
        train_features(F[keep], labels[keep], CFG)


def test_contract_mismatch(model, data):
    _, F = data
    with pytest.raises(ValueError, match="contract"):
        model.score(F, contract_version=2)
    d = model.to_dict()
    d["contract_version"] = 99
    with pytest.raises(ValueError, match="contract"):
        EnsembleModel.from_dict(d)
    with pytest.raises(ValueError):
        model.score(F[:, :10])
