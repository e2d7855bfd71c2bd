"""Prediction heads and the feature transformer.

These functions take observation-major features (``m x n``, already scaled
into ``[0, 1]``) and return observation-major results.
"""
from __future__ import annotations

import numpy as np

from .exceptions import ShapeError
from .gradients import softmax
from .model import FcmModel, Variant, forward


def _features(model: FcmModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.n:
        raise ShapeError(f"model expects n={model.n} features per row, got shape {X.shape}")
    return X.T


def outputs(model: FcmModel, X) -> np.ndarray:
    """Raw output-concept activations after ``depth`` steps, ``m x (r - n)``."""
    return forward(_features(model, X), model)[-1][model.n:].T


def predict_binary(model: FcmModel, X) -> np.ndarray:
    if model.variant is not Variant.FCMB:
        raise ValueError(f"predict_binary needs an FCMB model, got {model.variant.value}")
    return (outputs(model, X)[:, 0] >= 0.5).astype(np.int64)


def predict_multiclass(model: FcmModel, X) -> np.ndarray:
    # softmax is monotone, so the argmax of raw outputs is the same label;
    # np.argmax returns the lowest index on ties
    if model.variant is not Variant.FCMMC:
        raise ValueError(f"predict_multiclass needs an FCMMC model, got {model.variant.value}")
    return np.argmax(outputs(model, X), axis=1).astype(np.int64)


def predict(model: FcmModel, X) -> np.ndarray:
    """Integer class indices for either head."""
    if model.variant is Variant.FCMB:
        return predict_binary(model, X)
    return predict_multiclass(model, X)


def predict_labels(model: FcmModel, X) -> list:
    """Predictions mapped back to the original class names."""
    return [model.class_labels[i] for i in predict(model, X)]


def predict_proba(model: FcmModel, X) -> np.ndarray:
    """Binary head: the raw output activation (``m x 1``). Multiclass: softmax rows summing to 1."""
    out = outputs(model, X)
    if model.variant is Variant.FCMB:
        return out
    return softmax(out.T).T


def transform(model: FcmModel, X) -> np.ndarray:
    """State after ``depth - 1`` steps, all ``r`` concepts, ``m x r``.

    This is the space in which the final step acts as a linear classifier;
    for ``depth == 1`` it is the encoded input.
    """
    return forward(_features(model, X), model, depth=model.depth - 1)[-1].T


def d1_equivalence_check(model: FcmModel, X) -> float:
    """Max deviation between a one-step FCMB output and the equivalent logistic model.

    ``p = 1 / (1 + exp(-(w' x + b')))`` with ``w' = lam * W[r, :n]`` and
    ``b' = lam * (0.5 * W[r, r] + b[r] - 0.5)``.
    """
    if model.variant is not Variant.FCMB or model.depth != 1:
        raise ValueError("the logistic equivalence holds for FCMB models of depth 1")
    w_prime, b_prime = logistic_parameters(model)
    Xf = np.asarray(X, dtype=np.float64).reshape(-1, model.n)
    expected = 1.0 / (1.0 + np.exp(-(Xf @ w_prime + b_prime)))
    return float(np.max(np.abs(outputs(model, Xf)[:, 0] - expected)))


def logistic_parameters(model: FcmModel):
    """``(w', b')`` of the logistic model matching the last output row of an FCMB map."""
    lam, n = model.lam, model.n
    row = model.W[-1]
    return lam * row[:n], lam * (0.5 * row[-1] + model.b[-1] - 0.5)
