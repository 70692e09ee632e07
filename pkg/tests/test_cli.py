import numpy as np
import pytest

from cepairs.cli import main
from cepairs.fileio import read_predictions, read_target
from cepairs.features import FEATURE_NAMES, read_features_csv

FAST = ["--stages", "3", "--depth", "2"]


@pytest.fixture(scope="module")
def synth(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    prefix = str(d / "toy")
    assert main(["synth", "--out-prefix", prefix, "--n", "30", "--samples", "60", "--seed", "3"]) == 0
    return d, [f"{prefix}_pairs.csv", f"{prefix}_publicinfo.csv", f"{prefix}_target.csv"]


def test_synth_is_deterministic(synth, tmp_path):
    d, files = synth
    prefix = str(tmp_path / "again")
    assert main(["synth", "--out-prefix", prefix, "--n", "30", "--samples", "60", "--seed", "3"]) == 0
    with open(files[0], "rb") as a, open(f"{prefix}_pairs.csv", "rb") as b:
        assert a.read() == b.read()


def test_train_predict_evaluate(synth, tmp_path, capsys):
    _, (pairs, info, target) = synth
    model = tmp_path / "model.json"
    pred = tmp_path / "pred.csv"
    assert main(["train", "--pairs", pairs, "--publicinfo", info, "--target", target,
                 "--model-out", str(model), *FAST]) == 0
    assert main(["predict", "--pairs", pairs, "--publicinfo", info, "--model", str(model),
                 "--out", str(pred)]) == 0
    scores = read_predictions(pred)
    assert list(scores) == list(read_target(target))
    assert all(-1 <= s <= 1 for s in scores.values())
    capsys.readouterr()
    assert main(["evaluate", "--predictions", str(pred), "--target", target]) == 0
    out = capsys.readouterr().out
    assert "bidirectional" in out

    # retraining with the same arguments reproduces the model byte for byte
    again = tmp_path / "model2.json"
    main(["train", "--pairs", pairs, "--publicinfo", info, "--target", target,
          "--model-out", str(again), *FAST])
    assert model.read_bytes() == again.read_bytes()


def test_extract(synth, tmp_path):
    _, (pairs, info, _) = synth
    out = tmp_path / "features.csv"
    assert main(["extract", "--pairs", pairs, "--publicinfo", info, "--out", str(out)]) == 0
    ids, F = read_features_csv(out)
    assert len(ids) == 30 and F.shape == (30, len(FEATURE_NAMES))
    assert np.all(np.isfinite(F))


def test_cv(synth, capsys):
    _, (pairs, info, target) = synth
    assert main(["cv", "--pairs", pairs, "--publicinfo", info, "--target", target,
                 "--folds", "3", "--features", "baseline", *FAST]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("fold") for line in lines) == 3
    assert lines[-1].startswith("combined")


def test_errors_exit_nonzero_with_message(synth, tmp_path, capsys):
    _, (pairs, info, target) = synth
    assert main(["evaluate", "--predictions", str(tmp_path / "nope.csv"), "--target", target]) == 1
    assert "nope.csv" in capsys.readouterr().err

    bad = tmp_path / "bad_pairs.csv"
    bad.write_text('SampleID,A,B\nsynth1,"1 2 3","4 5"\n')
    assert main(["extract", "--pairs", str(bad), "--publicinfo", info, "--out", str(tmp_path / "f.csv")]) == 1
    err = capsys.readouterr().err
    assert "synth1" in err and "bad_pairs.csv" in err

    with pytest.raises(SystemExit):
        main(["train"])
