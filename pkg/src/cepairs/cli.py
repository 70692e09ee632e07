"""Command line entry point: ``cepairs {train,predict,extract,evaluate,cv,synth}``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import gbm
from .cv import kfold_cv
from .ensemble import EnsembleModel, train_features
from .features import FEATURE_SETS, extract_batch, write_features_csv
from .fileio import DataFormatError, load_dataset, read_predictions, read_target, write_dataset, write_predictions
from .metrics import bidirectional_auc_by_id
from .synth import SynthConfig, generate_synthetic

log = logging.getLogger("cepairs")


def _gbm_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stages", type=int, default=500)
    p.add_argument("--depth", type=int, default=9)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--features", choices=sorted(FEATURE_SETS), default="full")
    p.add_argument("--jobs", type=int, default=1)


def _data_args(p: argparse.ArgumentParser, target: bool) -> None:
    p.add_argument("--pairs", required=True)
    p.add_argument("--publicinfo", required=True)
    if target:
        p.add_argument("--target", required=True)


def _config(args) -> gbm.GbmConfig:
    return gbm.GbmConfig(n_stages=args.stages, max_depth=args.depth, learning_rate=args.learning_rate)


def cmd_train(args) -> None:
    ds = load_dataset(args.pairs, args.publicinfo, args.target)
    F = extract_batch(ds.pairs, n_jobs=args.jobs)
    model = train_features(F, ds.label_array(), _config(args), FEATURE_SETS[args.features], n_jobs=args.jobs)
    model.save(args.model_out)
    log.info("trained on %d pairs, model written to %s", len(ds), args.model_out)


def cmd_predict(args) -> None:
    ds = load_dataset(args.pairs, args.publicinfo)
    model = EnsembleModel.load(args.model)
    F = extract_batch(ds.pairs, model.quantizer, n_jobs=args.jobs)
    write_predictions(args.out, ds.ids, model.score(F))


def cmd_extract(args) -> None:
    ds = load_dataset(args.pairs, args.publicinfo)
    write_features_csv(args.out, ds.ids, extract_batch(ds.pairs, n_jobs=args.jobs))


def cmd_evaluate(args) -> None:
    result = bidirectional_auc_by_id(read_predictions(args.predictions), read_target(args.target))
    print(f"AUC(+1 vs rest) {result.forward:.5f}")
    print(f"AUC(-1 vs rest) {result.backward:.5f}")
    print(f"bidirectional   {result.mean:.5f}")


def cmd_cv(args) -> None:
    ds = load_dataset(args.pairs, args.publicinfo, args.target)
    F = extract_batch(ds.pairs, n_jobs=args.jobs)
    result = kfold_cv(F, ds.label_array(), args.folds, _config(args), FEATURE_SETS[args.features],
                      seed=args.seed, n_jobs=args.jobs)
    for i, a in enumerate(result.fold_auc):
        print(f"fold {i + 1:2d}  {a.mean:.5f}")
    for j in range(3):
        print(f"scheme {j + 1}  {result.scheme_mean_auc(j):.5f}")
    print(f"combined  {result.mean_auc:.5f}")


def cmd_synth(args) -> None:
    cfg = SynthConfig(n_pairs=args.n, seed=args.seed, min_samples=args.samples, max_samples=args.samples,
                      categorical_fraction=args.categorical_fraction)
    ds = generate_synthetic(cfg)
    prefix = args.out_prefix
    write_dataset(ds, f"{prefix}_pairs.csv", f"{prefix}_publicinfo.csv", f"{prefix}_target.csv")
    log.info("wrote %d pairs to %s_*.csv", len(ds), prefix)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cepairs", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train the three-scheme ensemble")
    _data_args(p, target=True)
    p.add_argument("--model-out", required=True)
    _gbm_args(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score pairs with a trained model")
    _data_args(p, target=False)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("extract", help="write the 43 features of every pair as CSV")
    _data_args(p, target=False)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="bidirectional AUC of a predictions file")
    p.add_argument("--predictions", required=True)
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("cv", help="stratified k-fold cross-validation")
    _data_args(p, target=True)
    p.add_argument("--folds", type=int, default=10)
    _gbm_args(p)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("synth", help="generate a synthetic labeled dataset")
    p.add_argument("--out-prefix", required=True)
    p.add_argument("--n", type=int, default=400)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--categorical-fraction", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    np.seterr(all="ignore")
    try:
        args.func(args)
    except (DataFormatError, ValueError, OSError) as exc:
        print(f"cepairs {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
