"""Cross-validation harness: FCM scores, clustering scores and FCM -> classifier pipelines.

For every fold the scaler and the FCM are fitted on the training split only.
Both splits are then mapped into the transformed space (the full state after
``depth - 1`` steps, input and output concepts alike). Clustering indices are
computed on each split separately, and downstream classifiers are trained and
tested on the original and on the transformed features over the same folds.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .baselines import make_downstream
from .data import RawTable, kfold_split, scale_split
from .inference import predict, transform
from .metrics import accuracy, cluster_scores, f1_macro, majority_vote_improvement
from .training import TrainConfig, fit, with_seed

TRANSFORM_FEATURES = "all r concepts of the state after depth-1 steps"


def _scores(pred, truth, k):
    return {"accuracy": accuracy(pred, truth), "f1_macro": f1_macro(pred, truth, k)}


def _cluster_block(X_orig, X_transf, y):
    orig = cluster_scores(X_orig, y)
    transf = cluster_scores(X_transf, y)
    vote = majority_vote_improvement(orig, transf)
    return {
        "original": orig._asdict(),
        "transformed": transf._asdict(),
        "vote": vote.verdict,
        "wins": vote.wins,
    }


@dataclass
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    variant: str
    final_loss: float
    fcm_test: dict
    fcm_train: dict
    clustering: dict
    pipeline: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "fold": self.fold,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "variant": self.variant,
            "final_loss": self.final_loss,
            "fcm": {"test": self.fcm_test, "train": self.fcm_train},
            "clustering": self.clustering,
        }
        if self.pipeline is not None:
            out["pipeline"] = self.pipeline
        return out


@dataclass
class CvReport:
    dataset: str
    config: TrainConfig
    n_folds: int
    seed: int
    stratified: bool
    downstream: Optional[str]
    folds: List[FoldResult] = field(default_factory=list)

    def values(self, *path) -> np.ndarray:
        """Per-fold values found at ``path`` inside each fold's dict, e.g. ``("fcm", "test", "accuracy")``."""
        out = []
        for f in self.folds:
            node = f.to_dict()
            for key in path:
                node = node[key]
            out.append(node)
        return np.asarray(out)

    def mean(self, *path) -> float:
        return float(np.mean(self.values(*path)))

    def summary(self) -> dict:
        s = {
            "fcm_test_accuracy": self.mean("fcm", "test", "accuracy"),
            "fcm_test_f1_macro": self.mean("fcm", "test", "f1_macro"),
            "fcm_train_accuracy": self.mean("fcm", "train", "accuracy"),
        }
        for split in ("train", "test"):
            for space in ("original", "transformed"):
                for score in ("davies_bouldin", "silhouette", "calinski_harabasz"):
                    s[f"{split}_{space}_{score}"] = self.mean("clustering", split, space, score)
        if self.downstream is not None:
            for space in ("original", "transformed"):
                for score in ("accuracy", "f1_macro"):
                    s[f"{self.downstream}_{space}_{score}"] = self.mean("pipeline", space, score)
        return s

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "config": self.config.to_mapping(),
            "seed": self.seed,
            "folds": self.n_folds,
            "stratified": self.stratified,
            "transform_features": TRANSFORM_FEATURES,
            "downstream": self.downstream,
            "per_fold": [f.to_dict() for f in self.folds],
            "mean": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def cross_validate(table: RawTable, cfg: TrainConfig, folds: int = 5, seed: int = 0,
                   downstream: Optional[str] = None, name: str = "dataset") -> CvReport:
    """Run k-fold CV of the FCM classifier, optionally paired with a downstream classifier.

    The fold plan depends on ``seed`` only; fold ``i`` trains its FCM with
    seed ``seed + i``.
    """
    if folds < 2:
        raise ValueError(f"need at least 2 folds, got {folds}")
    plan = kfold_split(len(table.y), folds, seed, table.y)
    k = len(table.label_names)
    clf = make_downstream(downstream) if downstream else None
    report = CvReport(name, cfg, folds, seed, plan.stratified, clf.name if clf else None)

    for i, (train_idx, test_idx) in enumerate(plan):
        train, test = scale_split(table, train_idx, test_idx)
        model, history = fit(train, with_seed(cfg, seed + i))
        T_train = transform(model, train.X)
        T_test = transform(model, test.X)
        pipeline = None
        if clf is not None:
            pipeline = {
                "name": clf.name,
                "original": _scores(clf.fit_predict(train.X, train.y, test.X, k), test.y, k),
                "transformed": _scores(clf.fit_predict(T_train, train.y, T_test, k), test.y, k),
            }
        report.folds.append(FoldResult(
            fold=i,
            n_train=len(train_idx),
            n_test=len(test_idx),
            variant=model.variant.value,
            final_loss=float(history[-1]),
            fcm_test=_scores(predict(model, test.X), test.y, k),
            fcm_train=_scores(predict(model, train.X), train.y, k),
            clustering={
                "train": _cluster_block(train.X, T_train, train.y),
                "test": _cluster_block(test.X, T_test, test.y),
            },
            pipeline=pipeline,
        ))
    return report


def pipeline_fit_eval(table: RawTable, cfg: TrainConfig, downstream: str, folds: int = 5,
                      seed: int = 0, name: str = "dataset") -> CvReport:
    """FCM transformer followed by ``downstream``, scored against ``downstream`` on the original features."""
    return cross_validate(table, cfg, folds, seed, downstream=downstream, name=name)
