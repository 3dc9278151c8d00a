"""
coral-cloze: train, predict, eval, gradcheck, stats and synth.

Usage:
  python main.py synth --out data/synth
  python main.py train --train data/synth/train.tsv --dev data/synth/dev.tsv --out runs/model.ckpt --lr 1e-4
  python main.py predict --checkpoint runs/model.ckpt --data data/synth/dev.tsv --out runs/dev.pred.tsv
  python main.py eval --predictions runs/dev.pred.tsv --gold data/synth/dev.tsv
  python main.py gradcheck

Exit codes: 0 success, 2 invalid input/config/usage, 3 numeric failure.
"""

import argparse
import sys

from cli.commands import cmd_eval, cmd_gradcheck, cmd_predict, cmd_stats, cmd_synth, cmd_train
from cli.config import build_config, read_config_file, threads_from_env
from common.errors import CoralClozeError
from common.log import error, set_quiet

# Flag destination -> TrainConfig field.
CONFIG_FLAGS = {
    "epochs": "epochs",
    "batch_size": "batch_size",
    "lr": "base_lr",
    "weight_decay": "weight_decay",
    "lambda_c": "lambda_c",
    "lambda_r": "lambda_r",
    "binning": "binning",
    "pooling": "pooling",
    "d_e": "d_e",
    "hidden": "h",
    "seed": "seed",
    "hash_seed": "hash_seed",
    "merge_dev": "merge_dev",
    "select": "select",
    "per_instance": "per_instance",
}


def _config_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="Flat key = value config file (TrainConfig field names)")
    p.add_argument("--epochs", type=int, help="Training epochs (default 5)")
    p.add_argument("--batch-size", type=int, help="Mini-batch size (default 16)")
    p.add_argument("--lr", type=float, help="Initial learning rate of the cosine schedule")
    p.add_argument("--weight-decay", type=float, help="Decoupled AdamW weight decay")
    p.add_argument("--lambda-c", type=float, help="Weight of the classification loss")
    p.add_argument("--lambda-r", type=float, help="Weight of the regression loss")
    p.add_argument("--binning", choices=["round", "floor"], help="Score binning mode")
    p.add_argument("--pooling", choices=["concat", "filler_only"], help="Pooling mode")
    p.add_argument("--d-e", type=int, help="Featurizer dimension (power of two)")
    p.add_argument("--hidden", type=int, help="Projection width (default d_e // 2)")
    p.add_argument("--seed", type=int, help="Seed for initialization and batch order")
    p.add_argument("--hash-seed", type=int, help="Seed of the n-gram hash")
    p.add_argument(
        "--merge-dev", action="store_true", default=None, help="Train on train + dev, keep last epoch"
    )
    p.add_argument("--select", choices=["spearman", "accuracy"], help="Best-epoch metric")
    p.add_argument(
        "--per-instance",
        action="store_true",
        default=None,
        help="Average Spearman per context instead of over all rows",
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coral-cloze", description="Ordinal plausibility scoring of cloze fillers."
    )
    ap.add_argument("--quiet", action="store_true", help="Suppress progress output on stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    config_parent = _config_parent()

    train = sub.add_parser("train", parents=[config_parent], help="Train and save the best checkpoint")
    train.add_argument("--train", required=True, help="Training TSV")
    train.add_argument("--dev", required=True, help="Dev TSV")
    train.add_argument("--out", required=True, help="Checkpoint path to write")
    train.add_argument("--log", help="Run log path (default <out>.log)")
    train.add_argument("--embeddings", help="NWRZ-EMB-1 file used instead of hashed features")
    train.add_argument("--format", choices=["text", "json"], default="text", help="Report format")

    predict = sub.add_parser("predict", help="Write predictions for a TSV")
    predict.add_argument("--checkpoint", required=True, help="Checkpoint written by train")
    predict.add_argument("--data", required=True, help="Input TSV (labels optional)")
    predict.add_argument("--out", required=True, help="Predictions TSV to write")
    predict.add_argument("--embeddings", help="NWRZ-EMB-1 file, if the model was trained on one")

    evaluate = sub.add_parser("eval", help="Score predictions against gold labels")
    evaluate.add_argument("--predictions", required=True, help="Predictions TSV")
    evaluate.add_argument("--gold", required=True, help="Gold TSV")
    evaluate.add_argument("--per-instance", action="store_true", help="Per-context Spearman")
    evaluate.add_argument("--format", choices=["text", "json"], default="text", help="Report format")

    gradcheck = sub.add_parser(
        "gradcheck", parents=[config_parent], help="Finite-difference gradient check"
    )
    gradcheck.add_argument("--tol", type=float, default=1e-5, help="Max relative error")
    gradcheck.add_argument("--fd-step", type=float, default=1e-5, help="Central-difference step")

    stats = sub.add_parser("stats", help="Label distribution of a TSV")
    stats.add_argument("--data", required=True, help="Input TSV")

    synth = sub.add_parser("synth", help="Write a synthetic train/dev pair")
    synth.add_argument("--out", required=True, help="Output directory")
    synth.add_argument("--n", type=int, default=2000, help="Number of instances")
    synth.add_argument("--dev-fraction", type=float, default=0.2, help="Share of contexts in dev")
    synth.add_argument("--seed", type=int, default=0, help="Generator seed")
    return ap


def config_from_args(args: argparse.Namespace):
    file_values = read_config_file(args.config) if args.config else {}
    overrides = {field: getattr(args, dest) for dest, field in CONFIG_FLAGS.items()}
    return build_config(file_values, overrides)


def run(args: argparse.Namespace) -> None:
    if args.command == "train":
        cmd_train(
            config_from_args(args),
            args.train,
            args.dev,
            args.out,
            embeddings_path=args.embeddings,
            log_path=args.log,
            threads=threads_from_env(),
            fmt=args.format,
        )
    elif args.command == "predict":
        cmd_predict(
            args.checkpoint, args.data, args.out, args.embeddings, threads=threads_from_env()
        )
    elif args.command == "eval":
        cmd_eval(args.predictions, args.gold, per_instance=args.per_instance, fmt=args.format)
    elif args.command == "gradcheck":
        cmd_gradcheck(config_from_args(args), tol=args.tol, h=args.fd_step)
    elif args.command == "stats":
        cmd_stats(args.data)
    elif args.command == "synth":
        cmd_synth(args.out, args.n, dev_fraction=args.dev_fraction, seed=args.seed)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    set_quiet(args.quiet)
    try:
        run(args)
    except CoralClozeError as e:
        error(str(e))
        return e.exit_code
    except (OSError, UnicodeDecodeError) as e:
        error(str(e))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
