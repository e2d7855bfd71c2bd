"""Command-line entry point: ``fcmclf {train,crossval,predict,transform,gradcheck}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .data import (format_float, load_config, load_csv, load_model, read_features, save_model,
                   scale_all, write_csv)
from .exceptions import ConfigError, DataError, NumericalError, ShapeError
from .experiment import cross_validate
from .gradients import gradient_check, logistic_gradient, random_instance, relative_error, backprop
from .inference import predict, predict_labels, transform
from .metrics import accuracy
from .model import Variant, forward
from .training import fit

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
GRADCHECK_THRESHOLD = 1e-4
GRADCHECK_MAX_N = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _scaled_features(model, path):
    X = read_features(path, model.n)
    return model.scaler.transform(X) if model.scaler is not None else np.clip(X, 0.0, 1.0)


def cmd_train(args) -> int:
    table = load_csv(args.data, args.label_col)
    cfg = load_config(args.config, seed=args.seed)
    dataset = scale_all(table)
    model, history = fit(dataset, cfg)
    save_model(model, args.model_out)
    acc = accuracy(predict(model, dataset.X), dataset.y)
    print(f"final loss {history[-1]:.6f} (initial {history[0]:.6f})")
    print(f"training accuracy {acc:.4f}")
    return EXIT_OK


def cmd_crossval(args) -> int:
    table = load_csv(args.data, args.label_col)
    cfg = load_config(args.config, seed=args.seed)
    report = cross_validate(table, cfg, folds=args.folds, seed=args.seed,
                            downstream=args.pipeline, name=Path(args.data).stem)
    text = report.to_json()
    if args.report:
        try:
            Path(args.report).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot write report {args.report}: {exc}") from None
    summary = report.summary()
    print(f"fcm accuracy {summary['fcm_test_accuracy']:.4f}  f1 {summary['fcm_test_f1_macro']:.4f}")
    if args.pipeline:
        name = report.downstream
        print(f"{name} accuracy {summary[f'{name}_original_accuracy']:.4f}  "
              f"fcm+{name} accuracy {summary[f'{name}_transformed_accuracy']:.4f}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = load_model(args.model)
    labels = predict_labels(model, _scaled_features(model, args.data))
    write_csv(args.out, ["label"], ([label] for label in labels))
    return EXIT_OK


def cmd_transform(args) -> int:
    model = load_model(args.model)
    T = transform(model, _scaled_features(model, args.data))
    header = [f"x{i + 1}" for i in range(model.n)] + [f"y{j + 1}" for j in range(model.n_outputs)]
    write_csv(args.out, header, ([format_float(v) for v in row] for row in T))
    return EXIT_OK


def cmd_gradcheck(args) -> int:
    if not 1 <= args.n <= GRADCHECK_MAX_N:
        raise UsageError(f"--n must lie in 1..{GRADCHECK_MAX_N}")
    if args.d < 1 or args.trials < 1:
        raise UsageError("--d and --trials must be positive")
    variant = Variant.parse(args.variant)
    k = 2 if variant is Variant.FCMB else args.k
    if k < 2:
        raise UsageError("--k must be at least 2")
    err = gradient_check(args.n, k, args.d, variant, args.trials, args.seed)
    print(f"backprop vs finite differences: max relative error {err:.3e} over {args.trials} trials")
    status = EXIT_OK if err < GRADCHECK_THRESHOLD else EXIT_NUMERIC
    if variant is Variant.FCMB and args.d == 1:
        rng = np.random.default_rng(args.seed)
        worst = 0.0
        for _ in range(args.trials):
            model, X, y = random_instance(rng, args.n, 2, 1, variant)
            exact = backprop(forward(X, model), y, "logloss", model)
            closed = logistic_gradient(model, X, y)
            worst = max(worst, float(relative_error(exact.dW, closed.dW).max()),
                        float(relative_error(exact.db, closed.db).max()))
        print(f"backprop vs logistic-regression gradient: max relative error {worst:.3e}")
        if worst >= GRADCHECK_THRESHOLD:
            status = EXIT_NUMERIC
    print("PASS" if status == EXIT_OK else "FAIL")
    return status


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fcmclf", description="Fuzzy cognitive map classifier toolkit")
    parser.add_argument("-v", "--verbose", action="store_true", help="log training progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train on a CSV file and write a model")
    p.add_argument("--data", required=True)
    p.add_argument("--config", required=True, help="key=value file: classifier, d, lambda, epochs, bs, optimizer, lr")
    p.add_argument("--model-out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label-col", type=int, default=-1)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("crossval", help="k-fold cross-validation with clustering scores")
    p.add_argument("--data", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report")
    p.add_argument("--pipeline", choices=["logreg", "knn3", "knn5"])
    p.add_argument("--label-col", type=int, default=-1)
    p.set_defaults(func=cmd_crossval)

    for name, func, text in (("predict", cmd_predict, "write one predicted label per row"),
                             ("transform", cmd_transform, "write the transformed state per row")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--model", required=True)
        p.add_argument("--data", required=True, help="CSV with a header and exactly n feature columns")
        p.add_argument("--out", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("gradcheck", help="compare backprop against finite differences")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--variant", default="FCMMC", choices=["FCMB", "FCMMC"])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gradcheck)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"fcmclf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"fcmclf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, ShapeError, ValueError) as exc:
        print(f"fcmclf: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
