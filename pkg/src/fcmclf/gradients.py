"""Losses, softmax and gradients of the cost with respect to shared weights.

The gradient is computed by unrolling the ``d`` map iterations into a
feed-forward network with tied weights: each layer contributes a
``(dW_t, db_t)`` pair and the pairs are summed. Derivatives of the
activation are recovered from the stored states, so pre-activations are
never kept.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import DataError, ShapeError
from .model import FcmModel, Variant, activation_derivative, forward, make_model, run_states

#: Clipping applied to binary predictions inside the log loss.
LOGLOSS_EPS = 1e-12


class LossKind(str, enum.Enum):
    LOG_LOSS = "logloss"
    SOFTMAX_CROSS_ENTROPY = "softmax_cross_entropy"

    @classmethod
    def for_variant(cls, variant) -> "LossKind":
        variant = Variant.parse(variant)
        return cls.LOG_LOSS if variant is Variant.FCMB else cls.SOFTMAX_CROSS_ENTROPY


@dataclass(frozen=True)
class Gradients:
    dW: np.ndarray
    db: np.ndarray


def softmax(y):
    """Column-wise softmax; a 1-D input is treated as a single column."""
    y = np.asarray(y, dtype=np.float64)
    z = y - np.max(y, axis=0, keepdims=True)
    e = np.exp(z)
    return e / np.sum(e, axis=0, keepdims=True)


def _labels(y, k=None) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        y = y.reshape(-1)
    if y.size and not np.all(np.equal(np.mod(y, 1), 0)):
        raise DataError("labels must be integers")
    y = y.astype(np.int64)
    if k is not None and y.size and (y.min() < 0 or y.max() >= k):
        raise DataError(f"labels must lie in 0..{k - 1}, got range {y.min()}..{y.max()}")
    return y


def logloss(y_tilde, y) -> float:
    """Mean binary cross-entropy of outputs in ``(0, 1)`` against 0/1 labels."""
    p = np.asarray(y_tilde, dtype=np.float64).reshape(-1)
    y = _labels(y, 2)
    if p.shape != y.shape:
        raise ShapeError(f"{p.size} predictions for {y.size} labels")
    p = np.clip(p, LOGLOSS_EPS, 1.0 - LOGLOSS_EPS)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1.0 - p)))


def softmax_cross_entropy(y_tilde, y) -> float:
    """Mean cross-entropy of ``softmax(y_tilde)`` (``k x m``) against class indices."""
    Y = np.asarray(y_tilde, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    y = _labels(y, Y.shape[0])
    if Y.shape[1] != y.size:
        raise ShapeError(f"{Y.shape[1]} prediction columns for {y.size} labels")
    z = Y - np.max(Y, axis=0, keepdims=True)
    log_norm = np.log(np.sum(np.exp(z), axis=0))
    return float(np.mean(log_norm - z[y, np.arange(y.size)]))


def loss(y_tilde, y, kind: LossKind) -> float:
    if LossKind(kind) is LossKind.LOG_LOSS:
        return logloss(y_tilde, y)
    return softmax_cross_entropy(y_tilde, y)


def _output_gradient(A_d, y, kind, lam, n) -> np.ndarray:
    m = A_d.shape[1]
    E = np.zeros_like(A_d)
    out = A_d[n:]
    if kind is LossKind.LOG_LOSS:
        # dL/dA = (A - y) / (A (1 - A) m); the sigmoid derivative cancels the denominator
        E[n:] = lam * (out - y[None, :]) / m
    else:
        G = softmax(out)
        G[y, np.arange(m)] -= 1.0
        E[n:] = activation_derivative(out, lam) * G / m
    return E


def loss_output_gradient(A_final, y, kind: LossKind, model: FcmModel) -> np.ndarray:
    """Gradient of the loss with respect to the last pre-activation, ``r x m``.

    Input-concept rows are zero because the loss reads output concepts only.
    """
    A = np.asarray(A_final, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != model.r:
        raise ShapeError(f"final state must be {model.r} x m, got {A.shape}")
    kind = LossKind(kind)
    y = _labels(y, 2 if kind is LossKind.LOG_LOSS else model.k)
    if y.size != A.shape[1]:
        raise ShapeError(f"{A.shape[1]} state columns for {y.size} labels")
    return _output_gradient(A, y, kind, model.lam, model.n)


def _backprop(states, y, kind, W, lam, n):
    d = len(states) - 1
    E = _output_gradient(states[-1], y, kind, lam, n)
    dW = np.zeros_like(W)
    db = np.zeros(W.shape[0])
    for t in range(d - 1, -1, -1):
        A = states[t]
        dW += E @ A.T
        db += E.sum(axis=1)
        if t > 0:
            E = (W.T @ E) * activation_derivative(A, lam)
    return dW, db


def backprop(trajectory, y, kind: LossKind, model: FcmModel) -> Gradients:
    """Gradient of the cost for a trajectory produced by ``forward(X, model)``.

    Per-layer contributions ``E_t A_t^T`` and row sums of ``E_t`` are
    accumulated because every layer shares ``(W, b)``.
    """
    states = tuple(np.asarray(s, dtype=np.float64) for s in trajectory)
    if len(states) < 2:
        raise ShapeError("trajectory needs at least two states")
    shape = states[0].shape
    if len(shape) != 2 or shape[0] != model.r or any(s.shape != shape for s in states):
        raise ShapeError(f"trajectory states must all be {model.r} x m")
    kind = LossKind(kind)
    y = _labels(y, 2 if kind is LossKind.LOG_LOSS else model.k)
    if y.size != shape[1]:
        raise ShapeError(f"{shape[1]} state columns for {y.size} labels")
    dW, db = _backprop(states, y, kind, model.W, model.lam, model.n)
    return Gradients(dW, db)


def cost(X, y, kind: LossKind, model: FcmModel) -> float:
    """Cost of the model on ``X`` (``n x m``): the loss of the composed map output."""
    states = forward(X, model)
    return loss(states[-1][model.n:], y, kind)


def finite_diff_gradient(X, y, kind: LossKind, model: FcmModel, h: float = 1e-5) -> Gradients:
    """Central-difference gradient of :func:`cost`, one parameter at a time."""
    if h <= 0:
        raise ValueError("h must be positive")
    kind = LossKind(kind)
    A0 = forward(X, model, depth=0)[0]
    W = np.array(model.W)
    b = np.array(model.b)
    n, lam, d = model.n, model.lam, model.depth

    def J(W_, b_):
        return loss(run_states(A0, W_, b_, lam, d)[-1][n:], y, kind)

    dW = np.zeros_like(W)
    for idx in np.ndindex(*W.shape):
        orig = W[idx]
        W[idx] = orig + h
        up = J(W, b)
        W[idx] = orig - h
        down = J(W, b)
        W[idx] = orig
        dW[idx] = (up - down) / (2 * h)
    db = np.zeros_like(b)
    for i in range(b.size):
        orig = b[i]
        b[i] = orig + h
        up = J(W, b)
        b[i] = orig - h
        down = J(W, b)
        b[i] = orig
        db[i] = (up - down) / (2 * h)
    return Gradients(dW, db)


def relative_error(a, b, floor: float = 1e-6) -> np.ndarray:
    """Elementwise ``|a - b| / max(|a|, |b|, floor)``.

    The floor keeps parameters whose exact gradient is zero from turning
    finite-difference round-off into a unit relative error.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return np.abs(a - b) / np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)


def random_instance(rng: np.random.Generator, n: int, k: int, depth: int, variant, m: int = 8,
                    lam: float | None = None):
    """Random model and data for gradient checks: ``(model, X (n x m), y)``."""
    variant = Variant.parse(variant)
    if variant is Variant.FCMB:
        k = 2
    r = n + (1 if variant is Variant.FCMB else k)
    lam = float(rng.uniform(0.5, 3.0)) if lam is None else lam
    model = make_model(rng.uniform(-1.5, 1.5, (r, r)), rng.uniform(-1.5, 1.5, r), n=n, k=k,
                       depth=depth, lam=lam, variant=variant)
    X = rng.uniform(0.0, 1.0, (n, m))
    y = rng.integers(0, k, m)
    return model, X, y


def gradient_check(n: int = 4, k: int = 3, depth: int = 3, variant="FCMMC", trials: int = 50,
                   seed: int = 0, h: float = 1e-5, m: int = 8) -> float:
    """Max per-parameter relative error between :func:`backprop` and finite differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        model, X, y = random_instance(rng, n, k, depth, variant, m)
        kind = LossKind.for_variant(model.variant)
        exact = backprop(forward(X, model), y, kind, model)
        approx = finite_diff_gradient(X, y, kind, model, h)
        worst = max(worst, float(relative_error(exact.dW, approx.dW).max()),
                    float(relative_error(exact.db, approx.db).max()))
    return worst


def logistic_gradient(model: FcmModel, X, y) -> Gradients:
    """Closed-form gradient of a depth-1 FCMB map, which is a logistic regression on ``encode(X)``.

    Only the output row is non-zero: ``lam * (p - y) A0^T / m`` and ``lam * mean(p - y)``.
    """
    if model.variant is not Variant.FCMB or model.depth != 1:
        raise ValueError("closed form holds for depth-1 FCMB models only")
    A0 = forward(X, model, depth=0)[0]
    p = forward(X, model)[-1][-1]
    resid = model.lam * (p - _labels(y, 2)) / A0.shape[1]
    dW = np.zeros_like(model.W)
    db = np.zeros_like(model.b)
    dW[-1] = A0 @ resid
    db[-1] = resid.sum()
    return Gradients(dW, db)
