"""Reference classifiers used downstream of the FCM transformer."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit
from scipy.spatial.distance import cdist

from .exceptions import ShapeError
from .gradients import softmax


@dataclass(frozen=True)
class LogRegWeights:
    """Linear scores ``X @ coef + intercept``; one column per class, highest wins."""

    coef: np.ndarray
    intercept: np.ndarray

    def decision_function(self, X) -> np.ndarray:
        return np.asarray(X, dtype=np.float64) @ self.coef + self.intercept

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)


def _binary_logreg(Xb, t, C, iters):
    # Xb carries a trailing column of ones, so the intercept is penalized with the weights
    def objective(w):
        z = Xb @ w
        margin = t * z
        value = 0.5 * w @ w + C * np.sum(np.logaddexp(0.0, -margin))
        grad = w - C * (Xb.T @ (t * expit(-margin)))
        return value, grad

    res = minimize(objective, np.zeros(Xb.shape[1]), jac=True, method="L-BFGS-B",
                   options={"maxiter": iters, "gtol": 1e-10})
    return res.x


def logreg_fit(X, y, k_classes: int, C: Optional[float] = 1.0, iters: int = 1000,
               lr: float = 0.5) -> LogRegWeights:
    """L2-penalized logistic regression, one-vs-rest, intercept penalized like the weights.

    Each class gets a binary model minimizing ``0.5 * ||w||^2 + C * sum log(1 + exp(-t x.w))``
    with ``t`` in ``{-1, +1}``, solved by L-BFGS from zero; two-class problems
    use a single model. ``C=None`` instead trains an unpenalized multinomial
    model by ``iters`` full-batch gradient steps of size ``lr``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64).reshape(-1)
    m, n = X.shape
    if y.size != m:
        raise ShapeError(f"{m} rows for {y.size} labels")

    if C is None:
        onehot = np.zeros((m, k_classes))
        onehot[np.arange(m), y] = 1.0
        coef = np.zeros((n, k_classes))
        intercept = np.zeros(k_classes)
        for _ in range(iters):
            G = (softmax((X @ coef + intercept).T).T - onehot) / m
            coef -= lr * (X.T @ G)
            intercept -= lr * G.sum(axis=0)
        return LogRegWeights(coef, intercept)

    Xb = np.hstack([X, np.ones((m, 1))])
    if k_classes == 2:
        w = _binary_logreg(Xb, np.where(y == 1, 1.0, -1.0), C, iters)
        W = np.column_stack([-w, w])
    else:
        W = np.column_stack([_binary_logreg(Xb, np.where(y == c, 1.0, -1.0), C, iters)
                             for c in range(k_classes)])
    return LogRegWeights(W[:n], W[n])


def knn_predict(train_X, train_y, query_X, k: int = 3) -> np.ndarray:
    """Majority vote of the ``k`` nearest training points (Euclidean).

    Equal distances favour the lower training index and tied votes the lower label.
    """
    train_X = np.asarray(train_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64).reshape(-1)
    query_X = np.asarray(query_X, dtype=np.float64)
    if train_X.shape[0] == 0:
        raise ValueError("empty training set")
    if not 1 <= k <= train_X.shape[0]:
        raise ValueError(f"k={k} must lie in 1..{train_X.shape[0]}")
    D = cdist(query_X, train_X)
    nearest = np.argsort(D, axis=1, kind="stable")[:, :k]
    n_labels = int(train_y.max()) + 1
    votes = np.zeros((query_X.shape[0], n_labels), dtype=np.int64)
    for j in range(k):
        np.add.at(votes, (np.arange(query_X.shape[0]), train_y[nearest[:, j]]), 1)
    return np.argmax(votes, axis=1)


class LogReg:
    """Downstream logistic regression with a fit/predict surface."""

    name = "logreg"

    def __init__(self, C: Optional[float] = 1.0):
        self.C = C

    def fit_predict(self, train_X, train_y, test_X, k_classes):
        weights = logreg_fit(train_X, train_y, k_classes, C=self.C)
        return weights.predict(test_X)


class Knn:
    def __init__(self, k: int = 3):
        self.k = k
        self.name = f"knn{k}"

    def fit_predict(self, train_X, train_y, test_X, k_classes):
        return knn_predict(train_X, train_y, test_X, self.k)


def make_downstream(name: str):
    name = name.lower()
    if name == "logreg":
        return LogReg()
    if name.startswith("knn") and name[3:].isdigit():
        return Knn(int(name[3:]))
    raise ValueError(f"unknown downstream classifier {name!r}; expected logreg or knnK")
