import numpy as np
import pytest

from cepairs import gbm
from cepairs.cv import kfold_cv, stratified_folds
from cepairs.data_model import VariableKind
from cepairs.features import SWAP_PERMUTATION, extract_batch
from cepairs.fileio import write_dataset
from cepairs.gbm import GbmConfig
from cepairs.synth import SynthConfig, generate_synthetic


def test_same_seed_same_bytes(tmp_path):
    cfg = SynthConfig(n_pairs=20, min_samples=30, max_samples=60, categorical_fraction=0.3, seed=9)
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        write_dataset(generate_synthetic(cfg), d / "p.csv", d / "i.csv", d / "t.csv")
    for name in ("p.csv", "i.csv", "t.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    other = generate_synthetic(SynthConfig(n_pairs=20, min_samples=30, max_samples=60, seed=10))
    assert other.pairs != generate_synthetic(cfg).pairs


@pytest.mark.parametrize("n", [10, 37, 400])
def test_label_fractions(n):
    cfg = SynthConfig(n_pairs=n, min_samples=10, max_samples=10)
    labels = generate_synthetic(cfg).label_array()
    counts = cfg.class_counts()
    assert sum(counts.values()) == n
    assert np.sum(labels == 1) == counts["causal"]
    assert np.sum(labels == -1) == counts["anticausal"]
    assert np.sum(labels == 0) == counts["independent"] + counts["confounded"]
    assert abs(counts["causal"] - 0.4 * n) < 1


def test_sample_range_and_kinds():
    ds = generate_synthetic(SynthConfig(n_pairs=40, min_samples=20, max_samples=50, categorical_fraction=1.0))
    assert all(20 <= len(p) <= 50 for p in ds.pairs)
    assert all(p.a.kind is not VariableKind.NUMERICAL for p in ds.pairs)
    assert ds.ids[:2] == ["synth1", "synth2"]


def test_invalid_config():
    with pytest.raises(ValueError):
        SynthConfig(causal=0.5)
    with pytest.raises(ValueError):
        SynthConfig(mechanisms=("sine",))
    with pytest.raises(ValueError):
        SynthConfig(min_samples=10, max_samples=5)


def test_folds_partition_and_stratify():
    labels = np.array([1] * 40 + [-1] * 37 + [0] * 23)
    folds = stratified_folds(labels, 10, seed=1)
    sizes = [f.size for f in folds]
    assert max(sizes) - min(sizes) <= 1
    joined = np.concatenate(folds)
    assert np.array_equal(np.sort(joined), np.arange(100))
    for f in folds:
        for c, total in ((1, 40), (-1, 37), (0, 23)):
            assert abs(np.sum(labels[f] == c) - total / 10) < 1 + 1e-9
    again = stratified_folds(labels, 10, seed=1)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))
    with pytest.raises(ValueError):
        stratified_folds(labels, 1)


@pytest.fixture(scope="module")
def small():
    ds = generate_synthetic(SynthConfig(n_pairs=60, min_samples=100, max_samples=100, seed=4))
    return extract_batch(ds.pairs), ds.label_array()


def test_no_leakage_across_folds(small, monkeypatch):
    F, labels = small
    seen = []
    real_fit = gbm.fit

    def spy(X, y, cfg=GbmConfig(), contract_version=None):
        seen.append(X.copy())
        return real_fit(X, y, cfg, contract_version)

    monkeypatch.setattr(gbm, "fit", spy)
    result = kfold_cv(F, labels, k=3, cfg=GbmConfig(n_stages=2, max_depth=2))
    assert len(seen) == 3 * 5
    for f, test in enumerate(result.folds):
        train_rows = {row.tobytes() for row in seen[5 * f]}  # the ternary model sees every row
        for row in F[test]:
            assert row.tobytes() not in train_rows
            assert row[SWAP_PERMUTATION].tobytes() not in train_rows
        assert len(train_rows) == 2 * (labels.size - test.size)


def test_cv_result_shape_and_determinism(small):
    F, labels = small
    cfg = GbmConfig(n_stages=5, max_depth=3)
    a = kfold_cv(F, labels, k=3, cfg=cfg, seed=2)
    b = kfold_cv(F, labels, k=3, cfg=cfg, seed=2)
    assert len(a.fold_auc) == 3 and len(a.fold_scheme_auc[0]) == 3
    assert np.array_equal(a.oof_scores, b.oof_scores)
    np.testing.assert_allclose(a.oof_scores, a.oof_scheme_scores.mean(axis=1), atol=1e-15)
    assert 0.0 <= a.mean_auc <= 1.0


def test_cv_rejects_missing_class():
    F = np.zeros((6, 43))
    with pytest.raises(ValueError, match="missing"):
        kfold_cv(F, [1, 1, 1, -1, -1, -1], k=2)

